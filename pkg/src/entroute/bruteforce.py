"""Exhaustive reference solvers for small networks.

These enumerate every simple path with networkx and apply the path and star
formulas directly, without the label machinery of :mod:`entroute.mosp` or the
vectorised combination in :mod:`entroute.star`.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence

import networkx as nx

from .algebra import PathSignature, contract, non_dominated
from .ghz import GHZ_TRUNCATION, star_fidelity, star_rate
from .netmodel import GAMMA_THRESHOLD, Network
from .star import STAR_METRICS


def to_networkx(net: Network) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(net.node_ids)
    g.add_edges_from((l.u, l.v) for l in net.links)
    return g


def direct_signature(net: Network, nodes: Sequence[str]) -> PathSignature:
    """Path metrics evaluated hop by hop from ``nodes[0]``, no threshold applied."""
    p, t, gamma = 1.0, 0.0, 1.0
    inv_sigma = 2.0 / net.node(nodes[0]).sigma
    for i in range(1, len(nodes)):
        link = net.link(nodes[i - 1], nodes[i])
        p = p * link.p if i == 1 else p * link.p * net.node(nodes[i - 1]).k
        t = t + 2.0 * link.t
        gamma = gamma * link.gamma
        inv_sigma = inv_sigma + 2.0 / net.node(nodes[i]).sigma
    return PathSignature(p, t, gamma, inv_sigma, tuple(nodes))


def all_paths(net: Network, source: str, target: str, g: nx.Graph | None = None) -> list[PathSignature]:
    """Every simple path source -> target whose Werner parameter stays >= 1/3."""
    if source == target:
        return [direct_signature(net, [source])]
    g = to_networkx(net) if g is None else g
    out = []
    for nodes in nx.all_simple_paths(g, source, target):
        sig = direct_signature(net, nodes)
        if sig.gamma >= GAMMA_THRESHOLD:
            out.append(sig)
    return out


def path_fronts(net: Network, source: str) -> dict[str, set[tuple[float, float, float, float]]]:
    """Per node, the set of non-dominated (p, t, gamma, inv_sigma) tuples."""
    g = to_networkx(net)
    return {
        v: {s.metrics() for s in non_dominated(all_paths(net, source, v, g))} for v in net.node_ids
    }


def star_front(net: Network, terminals: Sequence[str]) -> set[tuple[str, float, float]]:
    """Non-dominated (center, rate, fidelity) over every center and path tuple.

    Paths are walked terminal -> center so the arithmetic matches the solver's.
    """
    g = to_networkx(net)
    stars = []
    for center in net.node_ids:
        choices = [all_paths(net, tau, center, g) for tau in terminals]
        if any(not c for c in choices):
            continue
        for combo in itertools.product(*choices):
            branches = [contract(s) for s in combo]
            f = star_fidelity(branches)
            if f < GHZ_TRUNCATION:
                continue
            stars.append(_Star(center, star_rate(branches), f))
    front = non_dominated(stars, STAR_METRICS)
    return {(s.center, s.xi, s.f) for s in front}


class _Star:
    __slots__ = ("center", "xi", "f")

    def __init__(self, center: str, xi: float, f: float) -> None:
        self.center, self.xi, self.f = center, xi, f
