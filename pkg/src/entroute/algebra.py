"""Path signatures, their aggregation rules, dominance, and Pareto sets.

A path is summarised by four separately-routed metrics:

* ``p``: end-to-end success probability (link generation times interior swaps),
* ``t``: two-way classical communication time, ``2 * sum(link.t)``,
* ``gamma``: product of link Werner parameters,
* ``inv_sigma``: ``sum(2 / sigma_i)`` over every node on the path, endpoints included.

Each metric on its own is monotone and isotone under extension; the fidelity
obtained by contracting ``(gamma, t, inv_sigma)`` is not, which is why the three
are kept apart until a path is used as a star branch.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Hashable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from operator import attrgetter
from typing import Any, Generic, TypeVar

import numpy as np
from numba import njit

from .netmodel import GAMMA_THRESHOLD, LinkParams, Network, NodeParams


class PathError(ValueError):
    """An extension was requested that would break the simple-path contract."""


@dataclass(frozen=True, slots=True)
class PathSignature:
    p: float
    t: float
    gamma: float
    inv_sigma: float
    nodes: tuple[str, ...]

    @property
    def source(self) -> str:
        return self.nodes[0]

    @property
    def head(self) -> str:
        return self.nodes[-1]

    @property
    def hops(self) -> int:
        return len(self.nodes) - 1

    def metrics(self) -> tuple[float, float, float, float]:
        return (self.p, self.t, self.gamma, self.inv_sigma)


@dataclass(frozen=True, slots=True)
class BranchMetrics:
    p: float
    t: float
    F: float


def empty_path(net: Network, source: str) -> PathSignature:
    """Neutral signature: the zero-hop path sitting at ``source``."""
    node = net.node(source)
    return PathSignature(1.0, 0.0, 1.0, 2.0 / node.sigma, (source,))


def extend_path(
    sig: PathSignature, link: LinkParams, arriving_at: NodeParams, net: Network
) -> PathSignature | None:
    """Append ``link`` to the head of ``sig``; ``None`` if entanglement does not survive.

    The swap probability of the current head is charged here, when it stops
    being an endpoint, so every interior node contributes ``k`` exactly once.
    """
    head = sig.nodes[-1]
    if arriving_at.id in sig.nodes:
        raise PathError(f"node {arriving_at.id!r} already on path {sig.nodes}")
    if not ((link.u == head and link.v == arriving_at.id) or (link.v == head and link.u == arriving_at.id)):
        raise PathError(f"link {link.u!r}-{link.v!r} does not join {head!r} to {arriving_at.id!r}")
    gamma = sig.gamma * link.gamma
    if gamma < GAMMA_THRESHOLD:
        return None
    if len(sig.nodes) == 1:
        p = sig.p * link.p
    else:
        p = sig.p * link.p * net.node(head).k
    return PathSignature(
        p,
        sig.t + 2.0 * link.t,
        gamma,
        sig.inv_sigma + 2.0 / arriving_at.sigma,
        sig.nodes + (arriving_at.id,),
    )


def path_signature(net: Network, nodes: Sequence[str]) -> PathSignature | None:
    """Fold ``extend_path`` along an explicit node sequence."""
    sig: PathSignature | None = empty_path(net, nodes[0])
    for nxt in nodes[1:]:
        sig = extend_path(sig, net.link(sig.head, nxt), net.node(nxt), net)
        if sig is None:
            return None
    return sig


def contract(sig: PathSignature) -> BranchMetrics:
    """Collapse (gamma, t, inv_sigma) into branch fidelity via memory decay exp(-t/sigma)."""
    F = (3.0 * sig.gamma * math.exp(-sig.t * sig.inv_sigma) + 1.0) / 4.0
    return BranchMetrics(sig.p, sig.t, F)


# --- dominance --------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Metric:
    """One objective: an attribute name and its direction."""

    name: str
    maximize: bool

    def cost(self, obj: Any) -> float:
        value = getattr(obj, self.name)
        return -value if self.maximize else value


PATH_METRICS = (
    Metric("p", True),
    Metric("t", False),
    Metric("gamma", True),
    Metric("inv_sigma", False),
)


def costs(obj: Any, metrics: Sequence[Metric] = PATH_METRICS) -> tuple[float, ...]:
    """Project ``obj`` to a cost vector where smaller is better in every slot."""
    return tuple(m.cost(obj) for m in metrics)


def dominates_costs(a: Sequence[float], b: Sequence[float]) -> bool:
    strict = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strict = True
    return strict


def dominates(x: Any, y: Any, metrics: Sequence[Metric] = PATH_METRICS) -> bool:
    """True iff ``x`` is no worse than ``y`` in every metric and better in one.

    Comparisons are exact; adding a tolerance would make the relation intransitive.
    """
    return dominates_costs(costs(x, metrics), costs(y, metrics))


T = TypeVar("T")

_BEATEN = 1
_EQUAL = 2


@njit(cache=True)
def _scan_front(M, n, c, flags):  # pragma: no cover - compiled
    """-1 if some row of ``M[:n]`` dominates ``c``; otherwise mark the rows ``c`` beats or equals."""
    marked = 0
    for i in range(n):
        le = True
        lt = False
        ge = True
        gt = False
        for j in range(c.shape[0]):
            x = M[i, j]
            y = c[j]
            if x > y:
                le = False
                gt = True
            elif x < y:
                lt = True
                ge = False
        if le and lt:
            return -1
        if le and ge:
            flags[i] = _EQUAL
            marked += 1
        elif ge and gt:
            flags[i] = _BEATEN
            marked += 1
    return marked


class ParetoSet(Generic[T]):
    """Mutually non-dominated collection under a fixed list of metrics.

    A candidate whose cost vector equals a member's is a duplicate and is
    rejected, unless ``tie_key`` is given and the two keys differ.
    """

    __slots__ = ("metrics", "tie_key", "_items", "_arr", "_ids", "_getter", "_signs")

    def __init__(
        self,
        metrics: Sequence[Metric] = PATH_METRICS,
        items: Iterable[T] = (),
        tie_key: Callable[[T], Hashable] | None = None,
    ) -> None:
        self.metrics = tuple(metrics)
        self.tie_key = tie_key
        self._items: list[T] = []
        self._arr = np.empty((8, len(self.metrics)))
        names = [m.name for m in self.metrics]
        self._getter = (lambda x, g=attrgetter(names[0]): (g(x),)) if len(names) == 1 else attrgetter(*names)
        self._signs = np.array([-1.0 if m.maximize else 1.0 for m in self.metrics])
        self._ids: set[int] = set()
        for item in items:
            self.insert(item)

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[T]:
        return iter(self._items)

    def __contains__(self, item: object) -> bool:
        return item in self._items

    def __repr__(self) -> str:
        return f"ParetoSet({self._items!r})"

    @property
    def items(self) -> tuple[T, ...]:
        return tuple(self._items)

    def holds(self, item: T) -> bool:
        """Identity membership: is this very object still a member?"""
        return id(item) in self._ids

    def cost_set(self) -> set[tuple[float, ...]]:
        return {costs(x, self.metrics) for x in self._items}

    def is_dominated(self, cand: T) -> bool:
        c = costs(cand, self.metrics)
        return any(dominates_costs(costs(x, self.metrics), c) for x in self._items)

    def _has_twin(self, cand: T, rows) -> bool:
        if self.tie_key is None:
            return True
        key = self.tie_key(cand)
        return any(self.tie_key(self._items[i]) == key for i in rows)

    def insert(self, cand: T) -> bool:
        c = np.array(self._getter(cand), dtype=float) * self._signs
        n = len(self._items)
        flags = np.zeros(n, dtype=np.int8)
        marked = _scan_front(self._arr, n, c, flags) if n else 0
        if marked < 0:
            return False
        if marked:
            equal = np.flatnonzero(flags == _EQUAL)
            if equal.size and self._has_twin(cand, equal.tolist()):
                return False
            beaten = flags == _BEATEN
            if beaten.any():
                for i in np.flatnonzero(beaten).tolist():
                    self._ids.discard(id(self._items[i]))
                keep = np.flatnonzero(~beaten)
                self._items = [self._items[i] for i in keep.tolist()]
                self._arr[: keep.size] = self._arr[keep]
                n = keep.size
        if n == self._arr.shape[0]:
            self._arr = np.concatenate([self._arr, np.empty_like(self._arr)])
        self._arr[n] = c
        self._items.append(cand)
        self._ids.add(id(cand))
        return True

    def remove(self, item: T) -> None:
        i = next(j for j, x in enumerate(self._items) if x is item)
        self._ids.discard(id(item))
        del self._items[i]
        self._arr[i:-1] = self._arr[i + 1 :].copy()

    def copy(self) -> ParetoSet[T]:
        other = ParetoSet(self.metrics, tie_key=self.tie_key)
        other._items = list(self._items)
        other._arr = self._arr.copy()
        other._ids = set(self._ids)
        return other


def pareto_insert(front: ParetoSet[T], cand: T) -> tuple[ParetoSet[T], bool]:
    """Functional wrapper around :meth:`ParetoSet.insert`; the input set is not modified."""
    out = front.copy()
    inserted = out.insert(cand)
    return (out if inserted else front), inserted


def non_dominated(items: Iterable[T], metrics: Sequence[Metric] = PATH_METRICS) -> list[T]:
    """Quadratic reference filter: items not strictly dominated by any other item."""
    items = list(items)
    cs = [costs(x, metrics) for x in items]
    return [x for x, c in zip(items, cs) if not any(dominates_costs(o, c) for o in cs)]
