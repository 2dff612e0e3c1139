"""Multi-objective shortest paths from one source to every node.

Label-correcting search in the style of the classic node-queue MOSP algorithm:
a node leaves the frontier when popped, and re-enters it whenever its Pareto
front gains a label. Every label is expanded at most once; labels that became
dominated before their node was popped are never expanded.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .algebra import PATH_METRICS, ParetoSet, PathSignature, empty_path, extend_path
from .netmodel import LinkParams, Network, NetworkError


@dataclass
class SearchStats:
    pops: int = 0
    expansions: int = 0
    insertions: int = 0
    expanded: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)


def label_key(sig: PathSignature) -> tuple:
    # Total order for the frontier; dominance alone is only partial.
    return (sig.t, -sig.p, -sig.gamma, sig.inv_sigma, sig.nodes[-1])


def shortest_paths(
    net: Network,
    source: str,
    *,
    multiplicity: bool = False,
    front_cap: int | None = None,
    stats: SearchStats | None = None,
) -> dict[str, ParetoSet[PathSignature]]:
    """Pareto front of simple paths from ``source`` to every node of ``net``.

    Unreachable nodes (or nodes only reachable below the Werner threshold) map
    to an empty set. ``multiplicity`` keeps equal-metric paths with different
    node sequences. ``front_cap`` bounds each front and turns the result into
    an approximation; it is off by default.
    """
    if source not in net:
        raise NetworkError(f"unknown source node {source!r}")
    tie_key = (lambda s: s.nodes) if multiplicity else None
    fronts: dict[str, ParetoSet[PathSignature]] = {
        n: ParetoSet(PATH_METRICS, tie_key=tie_key) for n in net.node_ids
    }
    start = empty_path(net, source)
    fronts[source].insert(start)
    pending: dict[str, list[PathSignature]] = {source: [start]}
    frontier = [(label_key(start), source)]
    visited: set[str] = set()

    while frontier:
        _, node = heapq.heappop(frontier)
        labels = pending.pop(node, None)
        if not labels:
            continue
        if stats is not None:
            stats.pops += 1
        front = fronts[node]
        labels = [s for s in labels if front.holds(s)]
        visited.add(node)
        for sig in labels:
            if stats is not None:
                stats.expansions += 1
                stats.expanded.append((node, sig.nodes))
            for nbr, link in net.neighbors(node):
                if nbr in sig.nodes:
                    continue
                ext = extend_path(sig, link, net.node(nbr), net)
                if ext is None:
                    continue
                front = fronts[nbr]
                if not front.insert(ext):
                    continue
                if front_cap is not None and len(front) > front_cap:
                    worst = max(front, key=label_key)
                    front.remove(worst)
                    if worst is ext:
                        continue
                if stats is not None:
                    stats.insertions += 1
                pending.setdefault(nbr, []).append(ext)
                visited.discard(nbr)
                heapq.heappush(frontier, (label_key(ext), nbr))
    return fronts


def reconstruct(sig: PathSignature, net: Network) -> list[LinkParams]:
    """Links traversed by ``sig``, in order from its source."""
    return [net.link(a, b) for a, b in zip(sig.nodes, sig.nodes[1:])]
