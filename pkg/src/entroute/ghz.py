"""Rate and fidelity of GHZ distribution over a star or a general tree.

Branch fidelities enter through three per-branch factors::

    A(F) = (1 + 2F) / 3      (identity or Z-type error on the branch qubit)
    B(F) = 2 (1 - F) / 3     (X- or Y-type error)
    C(F) = (4F - 1) / 3      (the Werner parameter of the branch)

A star over branches ``F_1..F_T`` has fidelity ``(prod A + prod B + prod C) / 2``.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

from .algebra import BranchMetrics

# Fidelity floor below which a GHZ state is discarded by the search layer.
GHZ_TRUNCATION = 0.5


class TreeError(ValueError):
    """The branch set does not describe a valid distribution tree."""


def factor_a(F: float) -> float:
    return (1.0 + 2.0 * F) / 3.0


def factor_b(F: float) -> float:
    return 2.0 * (1.0 - F) / 3.0


def factor_c(F: float) -> float:
    return (4.0 * F - 1.0) / 3.0


def star_rate(branches: Sequence[BranchMetrics]) -> float:
    """Distribution rate of a star: all branches retried together until one joint success."""
    if len(branches) < 2:
        raise ValueError("a star needs at least two branches")
    prob = math.prod(b.p for b in branches)
    return prob / (2.0 * max(b.t for b in branches))


def star_fidelity(branches: Sequence[BranchMetrics | float]) -> float:
    """GHZ fidelity after a star distribution; raw value, never truncated."""
    if len(branches) < 2:
        raise ValueError("a star needs at least two branches")
    Fs = [b.F if isinstance(b, BranchMetrics) else float(b) for b in branches]
    a = math.prod(factor_a(F) for F in Fs)
    b = math.prod(factor_b(F) for F in Fs)
    c = math.prod(factor_c(F) for F in Fs)
    return 0.5 * (a + b + c)


@dataclass(frozen=True, slots=True)
class GhzFidelitySignature:
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0

    def extend(self, F: float) -> GhzFidelitySignature:
        return GhzFidelitySignature(self.a * factor_a(F), self.b * factor_b(F), self.c * factor_c(F))

    @property
    def value(self) -> float:
        return 0.5 * (self.a + self.b + self.c)

    def h(self) -> float:
        v = self.value
        return v if v >= GHZ_TRUNCATION else 0.0


def ghz_extend(sig: GhzFidelitySignature, F: float) -> GhzFidelitySignature:
    return sig.extend(F)


def h(sig: GhzFidelitySignature) -> float:
    return sig.h()


@dataclass(frozen=True, slots=True)
class RateSignature:
    a: float = 1.0  # product of branch probabilities
    b: float = 0.0  # largest branch communication time

    def extend(self, p: float, t: float) -> RateSignature:
        return RateSignature(self.a * p, max(self.b, t))

    def g(self) -> float:
        return self.a / (2.0 * self.b) if self.b > 0.0 else math.inf


def rate_extend(sig: RateSignature, p: float, t: float) -> RateSignature:
    return sig.extend(p, t)


def g(sig: RateSignature) -> float:
    return sig.g()


@dataclass(frozen=True, slots=True)
class TreeFidelityAccumulator:
    """Running state of the tree-scheme fidelity.

    ``E``/``O`` weight the even/odd number of X/Y-type errors accumulated on the
    initial terminal by the Steiner-branch channels; ``a``, ``b`` collect the
    terminal-branch factors and ``c`` the Werner parameters of every branch.
    """

    E: float = 1.0
    O: float = 0.0
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0

    def fold_steiner(self, F: float) -> TreeFidelityAccumulator:
        keep = factor_a(F)
        flip = 1.0 - keep
        return TreeFidelityAccumulator(
            self.E * keep + self.O * flip,
            self.O * keep + self.E * flip,
            self.a,
            self.b,
            self.c * factor_c(F),
        )

    def fold_terminal(self, F: float) -> TreeFidelityAccumulator:
        return TreeFidelityAccumulator(
            self.E, self.O, self.a * factor_a(F), self.b * factor_b(F), self.c * factor_c(F)
        )

    @property
    def value(self) -> float:
        return 0.5 * (self.E * self.a + self.O * self.b + self.c)


@dataclass(frozen=True, slots=True)
class Branch:
    u: str
    v: str
    metrics: BranchMetrics


@dataclass(frozen=True)
class DistributionTree:
    """Branches (bipartite pairs) joining terminals through Steiner nodes.

    Steiner nodes are the tree nodes that are not terminals; they must not be
    leaves. Terminals may sit inside the tree.
    """

    branches: tuple[Branch, ...]
    terminals: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "terminals", tuple(self.terminals))
        if len(set(self.terminals)) != len(self.terminals):
            raise TreeError("duplicate terminal")
        if len(self.terminals) < 2:
            raise TreeError("a tree needs at least two terminals")
        nodes = self.nodes
        if len(self.branches) != len(nodes) - 1:
            raise TreeError("branch set is not a tree (wrong number of branches)")
        for br in self.branches:
            if br.u == br.v:
                raise TreeError(f"self-loop branch at {br.u!r}")
        missing = [t for t in self.terminals if t not in nodes]
        if missing:
            raise TreeError(f"terminal {missing[0]!r} not covered by the tree")
        start = self.terminals[0]
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y, _ in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if seen != nodes:
            raise TreeError("disconnected tree")
        for s in self.steiner:
            if len(self.adjacency[s]) < 2:
                raise TreeError(f"Steiner node {s!r} is a leaf")

    @cached_property
    def nodes(self) -> set[str]:
        out = set(self.terminals)
        for br in self.branches:
            out.update((br.u, br.v))
        return out

    @cached_property
    def adjacency(self) -> dict[str, list[tuple[str, BranchMetrics]]]:
        adj: dict[str, list[tuple[str, BranchMetrics]]] = {n: [] for n in self.nodes}
        for br in self.branches:
            adj[br.u].append((br.v, br.metrics))
            adj[br.v].append((br.u, br.metrics))
        return adj

    @property
    def steiner(self) -> set[str]:
        return self.nodes - set(self.terminals)

    def distances_from(self, root: str) -> dict[str, float]:
        """Summed branch time from ``root`` to every tree node."""
        dist = {root: 0.0}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, m in self.adjacency[x]:
                if y not in dist:
                    dist[y] = dist[x] + m.t
                    queue.append(y)
        return dist


def star_tree(center: str, branches: Mapping[str, BranchMetrics]) -> DistributionTree:
    """Tree for a star; a terminal acting as its own center contributes no branch."""
    return DistributionTree(
        tuple(Branch(center, tau, m) for tau, m in branches.items() if tau != center),
        tuple(branches),
    )


def coordination_time(tree: DistributionTree) -> tuple[str, float]:
    """Node minimising the worst communication time to the terminals, and that time.

    Candidates are the branching (non-leaf) nodes; a single-branch tree falls back
    to its endpoints. Leaves are never strictly better than their neighbour.
    """
    candidates = sorted(n for n, nbrs in tree.adjacency.items() if len(nbrs) >= 2)
    if not candidates:
        candidates = sorted(tree.nodes)
    best = None
    for s in candidates:
        dist = tree.distances_from(s)
        worst = max(dist[tau] for tau in tree.terminals)
        if best is None or worst < best[1]:
            best = (s, worst)
    return best


def tree_rate(
    tree: DistributionTree, steiner_factor: float | Mapping[str, float] | None = None
) -> float:
    """Rate of the tree scheme.

    ``steiner_factor`` multiplies the expected completion time for each Steiner
    node (a scalar applies to all of them); the default treats Steiner operations
    as deterministic.
    """
    _, worst = coordination_time(tree)
    prob = math.prod(br.metrics.p for br in tree.branches)
    total = 2.0 * worst / prob
    if steiner_factor is not None:
        for s in tree.steiner:
            total *= steiner_factor if isinstance(steiner_factor, (int, float)) else steiner_factor.get(s, 1.0)
    return 1.0 / total


def channel_placement(
    tree: DistributionTree, initial: str | None = None
) -> tuple[dict[str, float], list[float]]:
    """Equivalent depolarising channels for the tree scheme started at ``initial``.

    Returns the branch fidelity acting on each non-initial terminal and the list
    of fidelities acting on the initial terminal, one per Steiner node (the
    branch joining it towards ``initial``), in breadth-first order. Internal
    terminals are split into a Steiner hub plus a perfect (F = 1) leaf branch.
    """
    if initial is None:
        initial = min(tree.terminals)
    if initial not in tree.terminals:
        raise TreeError(f"initial node {initial!r} is not a terminal")
    terminals = set(tree.terminals)
    on_terminal: dict[str, float] = {}
    on_initial: list[float] = []
    if len(tree.adjacency[initial]) >= 2:
        on_initial.append(1.0)
    seen = {initial}
    queue = deque([initial])
    while queue:
        x = queue.popleft()
        for y, m in tree.adjacency[x]:
            if y in seen:
                continue
            seen.add(y)
            queue.append(y)
            internal = len(tree.adjacency[y]) >= 2
            if y in terminals:
                if internal:
                    on_initial.append(m.F)
                    on_terminal[y] = 1.0
                else:
                    on_terminal[y] = m.F
            else:
                on_initial.append(m.F)
    return on_terminal, on_initial


def tree_fidelity(tree: DistributionTree, initial: str | None = None) -> float:
    """GHZ fidelity of the tree scheme; depends on the initial terminal.

    ``initial`` defaults to the smallest terminal id.
    """
    on_terminal, on_initial = channel_placement(tree, initial)
    acc = TreeFidelityAccumulator()
    for F in on_initial:
        acc = acc.fold_steiner(F)
    for tau in tree.terminals:
        if tau in on_terminal:
            acc = acc.fold_terminal(on_terminal[tau])
    return acc.value


def best_tree_fidelity(tree: DistributionTree) -> tuple[str, float]:
    """Initial terminal giving the highest tree-scheme fidelity (ties: smallest id)."""
    return max(
        ((tau, tree_fidelity(tree, tau)) for tau in sorted(tree.terminals)),
        key=lambda item: item[1],
    )


def fold_even_odd(Fs: Iterable[float]) -> tuple[float, float]:
    """(E, O) after folding the Steiner-branch fidelities ``Fs`` from (1, 0)."""
    acc = TreeFidelityAccumulator()
    for F in Fs:
        acc = acc.fold_steiner(F)
    return acc.E, acc.O
