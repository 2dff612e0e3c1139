"""Immutable quantum-network model: nodes, links, terminals, and the JSON file format."""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any

# Werner parameter at or below which a pair carries no entanglement.
GAMMA_THRESHOLD = 1.0 / 3.0


class NetworkError(ValueError):
    """Malformed network document or violated network invariant."""


def gamma_from_fidelity(F: float) -> float:
    return (4.0 * F - 1.0) / 3.0


def fidelity_from_gamma(gamma: float) -> float:
    return (3.0 * gamma + 1.0) / 4.0


@dataclass(frozen=True, slots=True)
class NodeParams:
    id: str
    k: float  # entanglement-swap success probability
    sigma: float  # memory decoherence time

    def __post_init__(self) -> None:
        if not (0.0 < self.k <= 1.0):
            raise NetworkError(f"node {self.id!r}: swap probability k={self.k} not in (0, 1]")
        if not self.sigma > 0.0:
            raise NetworkError(f"node {self.id!r}: decoherence time sigma={self.sigma} must be positive")


@dataclass(frozen=True, slots=True)
class LinkParams:
    u: str
    v: str
    p: float  # generation success probability
    t: float  # one-way classical latency
    gamma: float  # Werner parameter

    def __post_init__(self) -> None:
        name = f"link {self.u!r}-{self.v!r}"
        if self.u == self.v:
            raise NetworkError(f"{name}: self-loop")
        if not (0.0 < self.p <= 1.0):
            raise NetworkError(f"{name}: generation probability p={self.p} not in (0, 1]")
        if not self.t > 0.0:
            raise NetworkError(f"{name}: latency t={self.t} must be positive")
        if self.gamma > 1.0:
            raise NetworkError(f"{name}: gamma={self.gamma} exceeds 1")
        if not self.gamma > GAMMA_THRESHOLD:
            raise NetworkError(f"{name}: link below entanglement threshold (gamma={self.gamma} <= 1/3)")

    @property
    def key(self) -> frozenset[str]:
        return frozenset((self.u, self.v))

    @property
    def F(self) -> float:
        return fidelity_from_gamma(self.gamma)

    def other(self, node: str) -> str:
        if node == self.u:
            return self.v
        if node == self.v:
            return self.u
        raise KeyError(node)


@dataclass(frozen=True)
class Network:
    """Undirected network; parameters are shared by both link directions.

    ``nodes`` and ``links`` keep document order so serialization round-trips.
    """

    nodes: tuple[NodeParams, ...]
    links: tuple[LinkParams, ...]
    _node_index: Mapping[str, NodeParams] = field(init=False, repr=False, compare=False)
    _adjacency: Mapping[str, tuple[tuple[str, LinkParams], ...]] = field(
        init=False, repr=False, compare=False
    )
    _link_index: Mapping[frozenset[str], LinkParams] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "links", tuple(self.links))
        index: dict[str, NodeParams] = {}
        for node in self.nodes:
            if node.id in index:
                raise NetworkError(f"duplicate node {node.id!r}")
            index[node.id] = node
        adjacency: dict[str, list[tuple[str, LinkParams]]] = {n: [] for n in index}
        link_index: dict[frozenset[str], LinkParams] = {}
        for link in self.links:
            for end in (link.u, link.v):
                if end not in index:
                    raise NetworkError(f"link {link.u!r}-{link.v!r} references unknown node {end!r}")
            if link.key in link_index:
                raise NetworkError(f"duplicate link {link.u!r}-{link.v!r}")
            link_index[link.key] = link
            adjacency[link.u].append((link.v, link))
            adjacency[link.v].append((link.u, link))
        object.__setattr__(self, "_node_index", MappingProxyType(index))
        object.__setattr__(
            self,
            "_adjacency",
            MappingProxyType({n: tuple(nbrs) for n, nbrs in adjacency.items()}),
        )
        object.__setattr__(self, "_link_index", MappingProxyType(link_index))

    def __contains__(self, node_id: object) -> bool:
        return node_id in self._node_index

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: str) -> NodeParams:
        try:
            return self._node_index[node_id]
        except KeyError:
            raise NetworkError(f"unknown node {node_id!r}") from None

    def link(self, u: str, v: str) -> LinkParams:
        try:
            return self._link_index[frozenset((u, v))]
        except KeyError:
            raise NetworkError(f"no link between {u!r} and {v!r}") from None

    def has_link(self, u: str, v: str) -> bool:
        return frozenset((u, v)) in self._link_index

    def neighbors(self, node_id: str) -> tuple[tuple[str, LinkParams], ...]:
        """(neighbor id, link) pairs in link-document order."""
        return self._adjacency[node_id]

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def degree(self, node_id: str) -> int:
        return len(self._adjacency[node_id])

    def to_dict(self) -> dict[str, Any]:
        return {
            "nodes": [{"id": n.id, "k": n.k, "sigma": n.sigma} for n in self.nodes],
            "links": [
                {"u": l.u, "v": l.v, "p": l.p, "t": l.t, "gamma": l.gamma} for l in self.links
            ],
        }


@dataclass(frozen=True)
class TerminalSet:
    terminals: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terminals", tuple(self.terminals))

    def __iter__(self):
        return iter(self.terminals)

    def __len__(self) -> int:
        return len(self.terminals)

    def __contains__(self, node_id: object) -> bool:
        return node_id in self.terminals


def validate_terminals(net: Network, ts: TerminalSet | Iterable[str]) -> TerminalSet:
    """Check the terminal set against ``net``; returns it as a TerminalSet."""
    if not isinstance(ts, TerminalSet):
        ts = TerminalSet(tuple(ts))
    seen: set[str] = set()
    for node_id in ts:
        if node_id in seen:
            raise NetworkError(f"duplicate terminal {node_id!r}")
        seen.add(node_id)
        if node_id not in net:
            raise NetworkError(f"unknown terminal node {node_id!r}")
    if len(ts) < 2:
        raise NetworkError(f"need at least 2 terminals, got {len(ts)}")
    return ts


def _reject_constant(name: str) -> float:
    raise NetworkError(f"non-finite number {name} not permitted")


def _number(record: Mapping[str, Any], key: str, where: str) -> float:
    if key not in record:
        raise NetworkError(f"{where}: missing field {key!r}")
    value = record[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise NetworkError(f"{where}: field {key!r} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise NetworkError(f"{where}: field {key!r} is not finite")
    return value


def _string(record: Mapping[str, Any], key: str, where: str) -> str:
    value = record.get(key)
    if not isinstance(value, str):
        raise NetworkError(f"{where}: field {key!r} must be a string, got {value!r}")
    return value


def network_from_dict(doc: Mapping[str, Any]) -> Network:
    if not isinstance(doc, Mapping):
        raise NetworkError("network document must be an object")
    for key in ("nodes", "links"):
        if not isinstance(doc.get(key), list):
            raise NetworkError(f"network document needs a list {key!r}")
    nodes = []
    for i, rec in enumerate(doc["nodes"]):
        if not isinstance(rec, Mapping):
            raise NetworkError(f"nodes[{i}] must be an object")
        where = f"nodes[{i}]"
        nodes.append(
            NodeParams(_string(rec, "id", where), _number(rec, "k", where), _number(rec, "sigma", where))
        )
    links = []
    for i, rec in enumerate(doc["links"]):
        if not isinstance(rec, Mapping):
            raise NetworkError(f"links[{i}] must be an object")
        where = f"links[{i}]"
        links.append(
            LinkParams(
                _string(rec, "u", where),
                _string(rec, "v", where),
                _number(rec, "p", where),
                _number(rec, "t", where),
                _number(rec, "gamma", where),
            )
        )
    return Network(tuple(nodes), tuple(links))


def load_network(document: str | bytes) -> Network:
    """Parse and validate a network document (JSON text)."""
    try:
        doc = json.loads(document, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"malformed network document: {exc}") from exc
    return network_from_dict(doc)


def dump_network(net: Network) -> str:
    return json.dumps(net.to_dict(), indent=1) + "\n"


def read_network(path) -> Network:
    with open(path, encoding="utf-8") as fh:
        return load_network(fh.read())


def write_network(net: Network, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_network(net))
