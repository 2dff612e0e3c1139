"""Randomised verification suites behind ``entroute verify``.

Each suite returns how many cases it ran and how many failed. The closed-form
functions under test can be swapped out (mutation checks use this).
"""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import TextIO

import networkx as nx
import numpy as np

from . import bruteforce, ghz, oracle
from .algebra import (
    BranchMetrics,
    PathSignature,
    contract,
    empty_path,
    extend_path,
)
from .ghz import Branch, DistributionTree
from .mosp import SearchStats, shortest_paths
from .netgen import small_connected
from .netmodel import Network
from .star import t_star_exact

TOL = 1e-12


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: int
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.cases > 0


@dataclass
class VerifyReport:
    suites: list[SuiteResult]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def failed_names(self) -> list[str]:
        return [s.name for s in self.suites if not s.passed]


# --- random instances ---------------------------------------------------------


def random_fidelities(rng: np.random.Generator, n: int) -> list[float]:
    """Branch fidelities in (1/4, 1]."""
    return (1.0 - rng.uniform(0.0, 0.75, n)).tolist()


def random_tree(rng: np.random.Generator, max_qubits: int = 5) -> DistributionTree:
    """Tree with one or two Steiner nodes and leaf terminals, random fidelities."""
    n_steiner = int(rng.integers(1, 3))
    T = int(rng.integers(2, max_qubits + 1))
    terminals = [f"q{i}" for i in range(T)]
    steiner = [f"s{i}" for i in range(n_steiner)]
    attach = [steiner[i % n_steiner] for i in range(T)]  # every Steiner node gets a terminal
    rng.shuffle(attach)
    pairs = [(s, tau) for s, tau in zip(attach, terminals)]
    if n_steiner == 2:
        pairs.append(("s0", "s1"))
    Fs = random_fidelities(rng, len(pairs))
    branches = tuple(
        Branch(u, v, BranchMetrics(float(rng.uniform(0.2, 1.0)), float(rng.uniform(1.0, 50.0)), F))
        for (u, v), F in zip(pairs, Fs)
    )
    return DistributionTree(branches, tuple(terminals))


def oracle_tree_fidelity(tree: DistributionTree, initial: str) -> float:
    """Tree fidelity by density matrix, with the channel placement worked out via networkx."""
    g = nx.Graph()
    for br in tree.branches:
        g.add_edge(br.u, br.v, F=br.metrics.F)
    terminals = list(tree.terminals)
    terminal_F: list[float | None] = []
    for tau in terminals:
        if tau == initial:
            terminal_F.append(None)
        else:
            (nbr,) = g.neighbors(tau)
            terminal_F.append(g.edges[tau, nbr]["F"])
    steiner_F = []
    for s in sorted(tree.steiner):
        hop = nx.shortest_path(g, s, initial)[1]
        steiner_F.append(g.edges[s, hop]["F"])
    return oracle.tree_oracle(terminal_F, steiner_F, terminals.index(initial))


def random_simple_path(net: Network, rng: np.random.Generator, source: str, target: str | None = None,
                       max_hops: int = 5) -> list[str] | None:
    """Random walk without revisits; ``None`` if it gets stuck before ``target``."""
    nodes = [source]
    for _ in range(max_hops):
        nbrs = [v for v, _ in net.neighbors(nodes[-1]) if v not in nodes]
        if not nbrs:
            break
        nodes.append(nbrs[int(rng.integers(len(nbrs)))])
        if target is not None and nodes[-1] == target:
            return nodes
        if target is None and rng.random() < 0.3:
            return nodes
    if target is None:
        return nodes
    return None


def _unthresholded(sig: PathSignature, net: Network, nxt: str) -> PathSignature:
    link = net.link(sig.head, nxt)
    k = 1.0 if len(sig.nodes) == 1 else net.node(sig.head).k
    return PathSignature(
        sig.p * link.p * k,
        sig.t + 2.0 * link.t,
        sig.gamma * link.gamma,
        sig.inv_sigma + 2.0 / net.node(nxt).sigma,
        sig.nodes + (nxt,),
    )


def _fold(net: Network, nodes: list[str]) -> PathSignature:
    sig = empty_path(net, nodes[0])
    for nxt in nodes[1:]:
        sig = _unthresholded(sig, net, nxt)
    return sig


def find_isotonicity_witness(seed: int = 0, attempts: int = 20000):
    """Search small random networks for two paths (same ends) and one extra hop
    such that the contracted fidelity ranks them one way before the hop and the
    other way after. Returns (net, path1, path2, next_node) or ``None``."""
    rng = np.random.default_rng(seed)
    for attempt in range(attempts):
        net = small_connected(6, 8, int(rng.integers(2**32)), gamma_low=0.9)
        ids = net.node_ids
        s, u = ids[0], ids[int(rng.integers(1, len(ids)))]
        p1 = random_simple_path(net, rng, s, u)
        p2 = random_simple_path(net, rng, s, u)
        if p1 is None or p2 is None or p1 == p2:
            continue
        outs = [v for v, _ in net.neighbors(u) if v not in p1 and v not in p2]
        if not outs:
            continue
        v = outs[int(rng.integers(len(outs)))]
        a, b = _fold(net, p1), _fold(net, p2)
        if contract(a).F >= contract(b).F and contract(_unthresholded(a, net, v)).F < contract(
            _unthresholded(b, net, v)
        ).F:
            return net, p1, p2, v
    return None


# --- suites -------------------------------------------------------------------


def suite_star_oracle(rng, star_fidelity: Callable = ghz.star_fidelity, per_T: int = 100) -> SuiteResult:
    res = SuiteResult("star_fidelity vs density-matrix oracle", 0, 0)
    for T in (2, 3, 4, 5):
        for _ in range(per_T):
            Fs = random_fidelities(rng, T)
            res.cases += 1
            if not abs(star_fidelity(Fs) - oracle.star_oracle(Fs)) <= TOL:
                res.failures += 1
    return res


def suite_tree_oracle(rng, tree_fidelity: Callable = ghz.tree_fidelity, n: int = 100) -> SuiteResult:
    res = SuiteResult("tree_fidelity vs density-matrix oracle", 0, 0)
    for _ in range(n):
        tree = random_tree(rng)
        initial = tree.terminals[int(rng.integers(len(tree.terminals)))]
        res.cases += 1
        if not abs(tree_fidelity(tree, initial) - oracle_tree_fidelity(tree, initial)) <= TOL:
            res.failures += 1
    # A star seen as a tree: E and O start from the initial terminal's branch.
    for _ in range(n):
        T = int(rng.integers(2, 6))
        Fs = random_fidelities(rng, T)
        tree = DistributionTree(
            tuple(Branch("c", f"q{i}", BranchMetrics(1.0, 1.0, F)) for i, F in enumerate(Fs)),
            tuple(f"q{i}" for i in range(T)),
        )
        res.cases += 1
        E, O = ghz.fold_even_odd([Fs[0]])
        ok = abs(E - (1 + 2 * Fs[0]) / 3) <= TOL and abs(O - 2 * (1 - Fs[0]) / 3) <= TOL
        ok &= abs(tree_fidelity(tree, "q0") - ghz.star_fidelity(Fs)) <= TOL
        if not ok:
            res.failures += 1
    return res


def suite_spot_values(star_fidelity: Callable = ghz.star_fidelity) -> SuiteResult:
    checks = [
        abs(star_fidelity([1.0, 1.0, 1.0]) - 1.0) <= TOL,
        abs(star_fidelity([0.25, 1.0, 1.0]) - 0.25) <= TOL,
        abs(oracle.fidelity(oracle.maximally_mixed(3), oracle.ghz(3)) - 0.125) <= TOL,
        abs(oracle.star_oracle([0.25, 1.0, 1.0]) - 0.25) <= TOL,
    ]
    return SuiteResult("analytic spot values", len(checks), checks.count(False))


def _law_network(rng) -> Network:
    return small_connected(6, 10, int(rng.integers(2**32)), gamma_low=0.9)


def suite_path_monotonicity(rng, n: int = 1000) -> SuiteResult:
    res = SuiteResult("path metric monotonicity", 0, 0)
    while res.cases < n:
        net = _law_network(rng)
        nodes = random_simple_path(net, rng, net.node_ids[int(rng.integers(6))])
        sig = _fold(net, nodes)
        outs = [v for v, _ in net.neighbors(sig.head) if v not in sig.nodes]
        if not outs:
            continue
        v = outs[int(rng.integers(len(outs)))]
        ext = extend_path(sig, net.link(sig.head, v), net.node(v), net) or _unthresholded(sig, net, v)
        res.cases += 1
        if not (ext.p <= sig.p and ext.t >= sig.t and ext.gamma <= sig.gamma and ext.inv_sigma >= sig.inv_sigma):
            res.failures += 1
    return res


def suite_path_isotonicity(rng, n: int = 1000) -> SuiteResult:
    res = SuiteResult("path metric isotonicity", 0, 0)
    orders = {
        "p": lambda x, y: x >= y,
        "t": lambda x, y: x <= y,
        "gamma": lambda x, y: x >= y,
        "inv_sigma": lambda x, y: x <= y,
    }
    while res.cases < n:
        net = _law_network(rng)
        ids = net.node_ids
        s, u = ids[0], ids[int(rng.integers(1, len(ids)))]
        p1, p2 = random_simple_path(net, rng, s, u), random_simple_path(net, rng, s, u)
        if p1 is None or p2 is None:
            continue
        outs = [v for v, _ in net.neighbors(u) if v not in p1 and v not in p2]
        if not outs:
            continue
        v = outs[int(rng.integers(len(outs)))]
        a, b = _fold(net, p1), _fold(net, p2)
        a2, b2 = _unthresholded(a, net, v), _unthresholded(b, net, v)
        res.cases += 1
        for name, better in orders.items():
            x, y, x2, y2 = getattr(a, name), getattr(b, name), getattr(a2, name), getattr(b2, name)
            if (better(x, y) and not better(x2, y2)) or (better(y, x) and not better(y2, x2)):
                res.failures += 1
                break
    return res


def suite_label_isotonicity(rng, n: int = 1000) -> SuiteResult:
    res = SuiteResult("tree-algebra label-isotonicity (fidelity and rate)", 0, 0)
    for _ in range(n):
        sig = ghz.GhzFidelitySignature()
        for F in random_fidelities(rng, int(rng.integers(1, 5))):
            sig = sig.extend(F)
        F1, F2 = sorted(random_fidelities(rng, 2), reverse=True)
        s1, s2 = sig.extend(F1), sig.extend(F2)
        ok = s1.value >= s2.value and s1.h() >= s2.h()
        rs = ghz.RateSignature(float(rng.uniform(0.0, 1.0)), float(rng.uniform(0.1, 100.0)))
        p1, p2 = sorted(rng.uniform(0.0, 1.0, 2), reverse=True)
        t1, t2 = sorted(rng.uniform(0.1, 200.0, 2))
        tt = float(rng.uniform(0.1, 200.0))
        pp = float(rng.uniform(0.0, 1.0))
        ok &= rs.extend(p1, tt).g() >= rs.extend(p2, tt).g()
        ok &= rs.extend(pp, t1).g() >= rs.extend(pp, t2).g()
        res.cases += 1
        res.failures += not ok
    return res


def suite_even_odd(rng, n: int = 1000) -> SuiteResult:
    res = SuiteResult("even/odd weight identities", 0, 0)
    for _ in range(n):
        Fs = random_fidelities(rng, int(rng.integers(1, 6)))
        E, O = ghz.fold_even_odd(Fs[:-1])
        E2, O2 = ghz.fold_even_odd(Fs)
        keep = (1 + 2 * Fs[-1]) / 3
        flip = 1 - keep
        ok = abs(E2 + O2 - 1) <= TOL and E2 >= O2
        ok &= abs(E2 - (E * keep + O * flip)) <= TOL and abs(O2 - (O * keep + E * flip)) <= TOL
        ok &= abs((E - E2) - (E - O) * flip) <= TOL and abs((O2 - O) - (E - O) * flip) <= TOL
        # Folding order must not matter.
        Er, Or = ghz.fold_even_odd(Fs[::-1])
        ok &= abs(Er - E2) <= TOL and abs(Or - O2) <= TOL
        res.cases += 1
        res.failures += not ok
    return res


def suite_tree_monotonicity(rng, n: int = 1000) -> SuiteResult:
    res = SuiteResult("fidelity and rate monotonicity", 0, 0)
    for _ in range(n):
        T = int(rng.integers(2, 6))
        Fs = random_fidelities(rng, T)
        F_new = random_fidelities(rng, 1)[0]
        branches = [BranchMetrics(float(rng.uniform(0.01, 1)), float(rng.uniform(0.1, 100)), F) for F in Fs]
        new = BranchMetrics(float(rng.uniform(0.01, 1)), float(rng.uniform(0.1, 100)), F_new)
        ok = ghz.star_fidelity(Fs + [F_new]) <= ghz.star_fidelity(Fs) + 1e-15
        ok &= ghz.star_rate(branches + [new]) <= ghz.star_rate(branches)
        acc = ghz.TreeFidelityAccumulator()
        for F in Fs:
            acc = acc.fold_terminal(F)
        ok &= acc.fold_steiner(F_new).value <= acc.value + 1e-15
        # A new terminal leaf on a Steiner node never helps either metric. Hanging it
        # off a terminal instead moves that terminal's channel, so it is not an extension.
        tree = random_tree(rng, 4)
        hubs = sorted(tree.steiner)
        host = hubs[int(rng.integers(len(hubs)))]
        grown = DistributionTree(tree.branches + (Branch(host, "qnew", new),), tree.terminals + ("qnew",))
        init = tree.terminals[0]
        ok &= ghz.tree_rate(grown) <= ghz.tree_rate(tree)
        ok &= ghz.tree_fidelity(grown, init) <= ghz.tree_fidelity(tree, init) + 1e-15
        res.cases += 1
        res.failures += not ok
    return res


def suite_dominance_implication(rng, n: int = 1000) -> SuiteResult:
    res = SuiteResult("path dominance implies contracted fidelity order", 0, 0)
    for _ in range(n):
        g2 = float(rng.uniform(1 / 3, 1))
        t2 = float(rng.uniform(0, 500))
        i2 = float(rng.uniform(0, 0.01))
        g1 = float(rng.uniform(g2, 1))
        t1 = float(rng.uniform(0, t2))
        i1 = float(rng.uniform(0, i2))
        F1 = contract(PathSignature(1.0, t1, g1, i1, ("x",))).F
        F2 = contract(PathSignature(1.0, t2, g2, i2, ("x",))).F
        res.cases += 1
        res.failures += not (F1 >= F2)
    return res


def suite_witness(seed: int) -> SuiteResult:
    found = find_isotonicity_witness(seed)
    res = SuiteResult("collapsed fidelity is not isotone (witness search)", 1, 0 if found else 1)
    if found:
        net, p1, p2, v = found
        res.notes.append(f"paths {p1} vs {p2}, extended to {v}")
    return res


def suite_mosp(rng, seeds: int = 20) -> SuiteResult:
    res = SuiteResult("shortest_paths vs brute force", 0, 0)
    for _ in range(seeds):
        n = int(rng.integers(4, 9))
        net = small_connected(n, int(rng.integers(0, n)), int(rng.integers(2**32)))
        src = net.node_ids[0]
        stats = SearchStats()
        fronts = shortest_paths(net, src, stats=stats)
        ref = bruteforce.path_fronts(net, src)
        res.cases += 1
        ok = all({s.metrics() for s in fronts[v]} == ref[v] for v in net.node_ids)
        ok &= len(stats.expanded) == len(set(stats.expanded))
        res.failures += not ok
    return res


def suite_star(rng, seeds: int = 8) -> SuiteResult:
    res = SuiteResult("t_star_exact vs brute force (T=3)", 0, 0)
    for _ in range(seeds):
        net = small_connected(int(rng.integers(4, 8)), 3, int(rng.integers(2**32)))
        terms = sorted(rng.choice(net.node_ids, 3, replace=False).tolist())
        got = t_star_exact(net, terms)
        ref = bruteforce.star_front(net, terms)
        res.cases += 1
        res.failures += not same_star_sets({(s.center, s.xi, s.f) for s in got.solutions}, ref)
    return res


def same_star_sets(got: set, ref: set, tol: float = TOL) -> bool:
    """Set equality on (center, xi, f) with float slack ``tol``."""
    if len(got) != len(ref):
        return False
    pool = list(ref)
    for c, xi, f in sorted(got):
        match = next(
            (r for r in pool if r[0] == c and abs(r[1] - xi) <= tol * max(1.0, abs(xi)) and abs(r[2] - f) <= tol),
            None,
        )
        if match is None:
            return False
        pool.remove(match)
    return True


def run_suites(seed: int = 2021, out: TextIO | None = None, *, star_fidelity: Callable = ghz.star_fidelity,
               tree_fidelity: Callable = ghz.tree_fidelity, law_cases: int = 1000,
               timing: bool = False) -> VerifyReport:
    rng = np.random.default_rng(seed)
    jobs = [
        lambda: suite_star_oracle(rng, star_fidelity),
        lambda: suite_tree_oracle(rng, tree_fidelity),
        lambda: suite_spot_values(star_fidelity),
        lambda: suite_path_monotonicity(rng, law_cases),
        lambda: suite_path_isotonicity(rng, law_cases),
        lambda: suite_label_isotonicity(rng, law_cases),
        lambda: suite_even_odd(rng, law_cases),
        lambda: suite_tree_monotonicity(rng, law_cases),
        lambda: suite_dominance_implication(rng, law_cases),
        lambda: suite_witness(seed),
        lambda: suite_mosp(rng),
        lambda: suite_star(rng),
    ]
    results = []
    for job in jobs:
        start = time.perf_counter()
        r = job()
        r.seconds = time.perf_counter() - start
        results.append(r)
        if out is not None:
            status = "PASS" if r.passed else "FAIL"
            took = f" ({r.seconds:.2f}s)" if timing else ""
            out.write(f"{status}  {r.name}: {r.cases - r.failures}/{r.cases}{took}\n")
            for note in r.notes:
                out.write(f"      {note}\n")
    report = VerifyReport(results)
    if out is not None:
        out.write("all suites passed\n" if report.passed else f"FAILED: {', '.join(report.failed_names())}\n")
    return report
