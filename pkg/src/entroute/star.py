"""Exact search for Pareto-optimal GHZ distribution stars.

For every candidate center the search combines one Pareto-optimal path per
terminal. Stars are compared on (rate, fidelity) only; the four path metrics
matter solely inside the per-terminal fronts.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .algebra import Metric, ParetoSet, PathSignature, contract
from .ghz import GHZ_TRUNCATION, factor_a, factor_b, factor_c
from .mosp import shortest_paths
from .netmodel import Network, TerminalSet, validate_terminals

STAR_METRICS = (Metric("xi", True), Metric("f", True))
BRANCH_METRICS = (Metric("p", True), Metric("t", False), Metric("F", True))

# Combinations evaluated per vectorised block.
_BLOCK = 1 << 20


@dataclass(frozen=True)
class StarSolution:
    center: str
    terminals: tuple[str, ...]
    branch_paths: tuple[PathSignature, ...]  # center -> terminal, in terminal order
    xi: float
    f: float
    overlap: bool

    def links(self) -> list[frozenset[str]]:
        return [frozenset(e) for sig in self.branch_paths for e in zip(sig.nodes, sig.nodes[1:])]


@dataclass
class StarResult:
    solutions: list[StarSolution]
    complete: bool
    status: str  # "ok", "infeasible" (no common center) or "below_threshold"
    centers: tuple[str, ...] = ()
    discarded_overlap: int = 0
    fronts: dict[str, dict[str, ParetoSet[PathSignature]]] = field(default_factory=dict, repr=False)

    @property
    def feasible(self) -> bool:
        return self.status == "ok"


def reverse(sig: PathSignature) -> PathSignature:
    """Same path walked the other way; every path metric is direction-free."""
    return PathSignature(sig.p, sig.t, sig.gamma, sig.inv_sigma, sig.nodes[::-1])


def branches_overlap(paths: Iterable[PathSignature]) -> bool:
    used: set[frozenset[str]] = set()
    for sig in paths:
        for a, b in zip(sig.nodes, sig.nodes[1:]):
            e = frozenset((a, b))
            if e in used:
                return True
            used.add(e)
    return False


def feasibility_check(fronts: Mapping[str, Mapping[str, Sequence[PathSignature]]]) -> tuple[str, ...]:
    """Nodes reached by a surviving path from every terminal (necessary for a star)."""
    per_terminal = list(fronts.values())
    nodes = per_terminal[0].keys()
    return tuple(sorted(n for n in nodes if all(len(fr[n]) > 0 for fr in per_terminal)))


def _branch_candidates(front: Iterable[PathSignature]) -> list[tuple[PathSignature, float, float, float]]:
    """Path front reduced to its non-dominated contracted (p, t, F) triples."""
    reduced: ParetoSet = ParetoSet(BRANCH_METRICS)
    by_id = {}
    for sig in front:
        m = contract(sig)
        if reduced.insert(m):
            by_id[id(m)] = sig
    return [(by_id[id(m)], m.p, m.t, m.F) for m in reduced]


def _center_front(
    center: str, terminals: tuple[str, ...], candidates: list[list[tuple[PathSignature, float, float, float]]]
) -> list[StarSolution]:
    sizes = [len(c) for c in candidates]
    cols = [np.array([row[1:] for row in c], dtype=float) for c in candidates]
    arrays = []
    for col in cols:
        p, t, F = col[:, 0], col[:, 1], col[:, 2]
        arrays.append((p, t, factor_a(F), factor_b(F), factor_c(F)))

    total = int(np.prod(sizes))
    kept_idx: list[np.ndarray] = []
    kept_xi: list[np.ndarray] = []
    kept_f: list[np.ndarray] = []
    # Blocks over the flat index; each block is unravelled into per-terminal indices.
    for lo in range(0, total, _BLOCK):
        flat = np.arange(lo, min(total, lo + _BLOCK))
        idx = np.unravel_index(flat, sizes)
        prob = arrays[0][0][idx[0]]
        tmax = arrays[0][1][idx[0]]
        a = arrays[0][2][idx[0]]
        b = arrays[0][3][idx[0]]
        c = arrays[0][4][idx[0]]
        for k in range(1, len(sizes)):
            pk, tk, ak, bk, ck = arrays[k]
            prob = prob * pk[idx[k]]
            tmax = np.maximum(tmax, tk[idx[k]])
            a = a * ak[idx[k]]
            b = b * bk[idx[k]]
            c = c * ck[idx[k]]
        xi = prob / (2.0 * tmax)
        f = 0.5 * (a + b + c)
        ok = f >= GHZ_TRUNCATION
        if not ok.any():
            continue
        flat, xi, f = flat[ok], xi[ok], f[ok]
        # Cheap prefilter: sorted by xi descending, keep points not beaten in f by an earlier one.
        order = np.lexsort((-f, -xi))
        fs = f[order]
        best_before = np.concatenate(([-np.inf], np.maximum.accumulate(fs)[:-1]))
        keep = order[fs >= best_before]
        kept_idx.append(flat[keep])
        kept_xi.append(xi[keep])
        kept_f.append(f[keep])

    front: ParetoSet[StarSolution] = ParetoSet(STAR_METRICS)
    if not kept_idx:
        return []
    flat = np.concatenate(kept_idx)
    xis = np.concatenate(kept_xi)
    fs = np.concatenate(kept_f)
    for pos in np.lexsort((-fs, -xis)):
        choice = np.unravel_index(int(flat[pos]), sizes)
        paths = tuple(reverse(candidates[k][int(j)][0]) for k, j in enumerate(choice))
        front.insert(
            StarSolution(center, terminals, paths, float(xis[pos]), float(fs[pos]), branches_overlap(paths))
        )
    return list(front)


def t_star_exact(
    net: Network,
    terminals: TerminalSet | Sequence[str],
    *,
    disjoint: bool = False,
    fronts: Mapping[str, Mapping[str, ParetoSet[PathSignature]]] | None = None,
) -> StarResult:
    """Pareto front of stars (rate, fidelity) connecting ``terminals``.

    Solutions whose fidelity falls below 1/2 are discarded. By default stars
    whose branches share a link are kept. With ``disjoint`` they are removed
    after the search, and ``complete`` turns false if any front member had to
    go, since a dominated disjoint star may then be missing.
    """
    ts = validate_terminals(net, terminals)
    tset = tuple(ts)
    if fronts is None:
        fronts = {tau: shortest_paths(net, tau) for tau in tset}
    centers = feasibility_check(fronts)
    if not centers:
        return StarResult([], True, "infeasible", centers, fronts=dict(fronts))

    overall: ParetoSet[StarSolution] = ParetoSet(STAR_METRICS, tie_key=lambda s: s.center)
    for center in centers:
        candidates = [_branch_candidates(fronts[tau][center]) for tau in tset]
        for sol in _center_front(center, tset, candidates):
            overall.insert(sol)

    solutions = sorted(overall, key=lambda s: (-s.xi, -s.f, s.center))
    # Centers exist but every star fell below the fidelity floor.
    status = "ok" if solutions else "below_threshold"
    complete = True
    dropped = 0
    if disjoint:
        kept = [s for s in solutions if not s.overlap]
        dropped = len(solutions) - len(kept)
        complete = dropped == 0
        solutions = kept
    return StarResult(solutions, complete, status, centers, dropped, fronts=dict(fronts))
