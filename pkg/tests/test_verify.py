import io

import numpy as np

from entroute import ghz
from entroute.verify import find_isotonicity_witness, random_tree, run_suites, oracle_tree_fidelity


def test_pristine_build_passes():
    out = io.StringIO()
    report = run_suites(seed=7, out=out, law_cases=200)
    assert report.passed, out.getvalue()
    assert "all suites passed" in out.getvalue()


def test_sign_mutation_in_star_fidelity_is_caught():
    def mutant(branches):
        Fs = [float(F) for F in branches]
        a = np.prod([ghz.factor_a(F) for F in Fs])
        b = np.prod([ghz.factor_b(F) for F in Fs])
        c = np.prod([ghz.factor_c(F) for F in Fs])
        return 0.5 * (a - b + c)

    out = io.StringIO()
    report = run_suites(seed=7, out=out, star_fidelity=mutant, law_cases=50)
    assert not report.passed
    assert any("star_fidelity" in name for name in report.failed_names())
    assert "FAIL  star_fidelity" in out.getvalue()


def test_placement_mutation_in_tree_fidelity_is_caught():
    def mutant(tree, initial):
        # Charges Steiner channels to the wrong place: ignores E/O parity.
        on_terminal, on_initial = ghz.channel_placement(tree, initial)
        return ghz.star_fidelity(list(on_terminal.values()) + on_initial)

    report = run_suites(seed=7, tree_fidelity=mutant, law_cases=50)
    assert report.failed_names() == ["tree_fidelity vs density-matrix oracle"]


def test_random_trees_are_valid():
    rng = np.random.default_rng(0)
    for _ in range(50):
        tree = random_tree(rng)
        assert 1 <= len(tree.steiner) <= 2 and len(tree.terminals) <= 5
        assert abs(ghz.tree_fidelity(tree, tree.terminals[-1]) - oracle_tree_fidelity(tree, tree.terminals[-1])) < 1e-12


def test_witness_search_finds_one():
    assert find_isotonicity_witness(0) is not None
