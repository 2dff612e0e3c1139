import math
from dataclasses import dataclass

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_net
from entroute.algebra import (
    PATH_METRICS,
    Metric,
    ParetoSet,
    PathError,
    PathSignature,
    contract,
    dominates,
    empty_path,
    extend_path,
    non_dominated,
    pareto_insert,
    path_signature,
)

LAWS = settings(max_examples=1000, deadline=None)


@pytest.fixture
def chain():
    return make_net(
        [("s", 1.0, 1e4), ("v", 0.9, 1e4), ("w", 1.0, 2e4), ("x", 1.0, 1e4)],
        [("s", "v", 0.9, 3.0, 0.9), ("v", "w", 0.8, 2.0, 0.8), ("w", "x", 1.0, 1.0, 0.5)],
    )


def test_extend_from_source(chain):
    sig = extend_path(empty_path(chain, "s"), chain.link("s", "v"), chain.node("v"), chain)
    assert (sig.p, sig.t, sig.gamma) == (0.9, 6.0, 0.9)
    assert sig.inv_sigma == pytest.approx(4e-4, rel=1e-15)
    assert sig.nodes == ("s", "v")


def test_extend_charges_interior_swap(chain):
    sig = path_signature(chain, ["s", "v", "w"])
    assert sig.p == pytest.approx(0.648, rel=1e-15)
    assert sig.t == 10.0
    assert sig.gamma == pytest.approx(0.72, rel=1e-15)
    assert sig.inv_sigma == pytest.approx(5e-4, rel=1e-15)


def test_three_weak_links_rejected():
    net = make_net("abcd", [("a", "b", 1, 1, 0.6), ("b", "c", 1, 1, 0.6), ("c", "d", 1, 1, 0.6)])
    assert path_signature(net, ["a", "b", "c"]) is not None
    assert path_signature(net, ["a", "b", "c", "d"]) is None


def test_revisit_and_bad_link_are_caller_errors(chain):
    sig = path_signature(chain, ["s", "v"])
    with pytest.raises(PathError):
        extend_path(sig, chain.link("s", "v"), chain.node("s"), chain)
    with pytest.raises(PathError):
        extend_path(sig, chain.link("w", "x"), chain.node("x"), chain)


def test_empty_path_is_neutral(chain):
    sig = empty_path(chain, "w")
    assert sig.metrics() == (1.0, 0.0, 1.0, 2.0 / 2e4)
    assert sig.hops == 0 and sig.head == sig.source == "w"


def test_contract_examples():
    F = contract(PathSignature(0.5, 100.0, 0.9, 1e-4, ("a", "b"))).F
    assert F == pytest.approx(0.9182836, abs=5e-8)
    assert F == (3 * 0.9 * math.exp(-0.01) + 1) / 4
    assert contract(PathSignature(1.0, 0.0, 1.0, 1e-4, ("a",))).F == 1.0
    assert 0.25 < contract(PathSignature(1.0, 30.0, 1 / 3 + 1e-9, 1.0, ("a", "b"))).F < 0.25 + 1e-12


@dataclass(frozen=True)
class PT:
    p: float
    t: float


PT_METRICS = (Metric("p", True), Metric("t", False))


def test_dominance_examples():
    assert dominates(PT(0.9, 5), PT(0.8, 6), PT_METRICS)
    assert not dominates(PT(0.9, 5), PT(0.9, 5), PT_METRICS)
    assert not dominates(PT(0.9, 10), PT(0.8, 6), PT_METRICS)
    assert not dominates(PT(0.8, 6), PT(0.9, 10), PT_METRICS)


def test_pareto_insert_cases():
    front = ParetoSet(PT_METRICS, [PT(0.9, 10), PT(0.5, 4)])
    same, inserted = pareto_insert(front, PT(0.4, 11))
    assert not inserted and same is front and len(front) == 2
    grown, inserted = pareto_insert(front, PT(0.7, 7))
    assert inserted and len(grown) == 3 and len(front) == 2
    top, inserted = pareto_insert(grown, PT(0.95, 3))
    assert inserted and list(top) == [PT(0.95, 3)]


def test_pareto_duplicates_and_tie_key():
    front = ParetoSet(PT_METRICS)
    assert front.insert(PT(0.5, 1))
    assert not front.insert(PT(0.5, 1))
    keyed = ParetoSet(PT_METRICS, tie_key=id)
    a, b = PT(0.5, 1), PT(0.5, 1)
    assert keyed.insert(a) and keyed.insert(b)
    assert len(keyed) == 2


pairs = st.tuples(st.floats(0, 1), st.floats(0, 10))


@given(st.lists(pairs, max_size=40))
@settings(max_examples=300, deadline=None)
def test_pareto_set_matches_reference(points):
    items = [PT(p, t) for p, t in points]
    front = ParetoSet(PT_METRICS, items)
    got = sorted((x.p, x.t) for x in front)
    assert got == sorted(set((x.p, x.t) for x in non_dominated(items, PT_METRICS)))
    for x in front:
        assert not any(dominates(y, x, PT_METRICS) for y in front)


def test_pareto_remove_and_copy():
    front = ParetoSet(PT_METRICS, [PT(0.9, 10), PT(0.5, 4)])
    clone = front.copy()
    front.remove(front.items[0])
    assert len(front) == 1 and len(clone) == 2
    assert front.insert(PT(0.9, 10))


# --- laws --------------------------------------------------------------------

unit = st.floats(0.34, 1.0)
sig_st = st.builds(
    lambda p, t, g, i: PathSignature(p, t, g, i, ("s", "u")),
    st.floats(0.01, 1.0),
    st.floats(0, 500),
    unit,
    st.floats(1e-5, 1e-2),
)
label_st = st.tuples(st.floats(0.01, 1.0), st.floats(0.01, 100), unit, st.floats(0.01, 1.0), st.floats(10, 1e5))


def _ext(sig, label):
    p, t, g, k, sigma = label
    net = make_net([("s", 1.0, 1e4), ("u", k, 1e4), ("v", 1.0, sigma)], [("u", "v", p, t, g), ("s", "u", 1, 1, 1)])
    out = extend_path(sig, net.link("u", "v"), net.node("v"), net)
    if out is None:
        # Below the threshold: compare the raw products instead.
        out = PathSignature(sig.p * p * k, sig.t + 2 * t, sig.gamma * g, sig.inv_sigma + 2 / sigma, ("s", "u", "v"))
    return out


@given(sig_st, label_st)
@LAWS
def test_monotone_per_metric(sig, label):
    ext = _ext(sig, label)
    assert ext.p <= sig.p and ext.t >= sig.t and ext.gamma <= sig.gamma and ext.inv_sigma >= sig.inv_sigma


@given(sig_st, sig_st, label_st)
@LAWS
def test_isotone_per_metric(a, b, label):
    a2, b2 = _ext(a, label), _ext(b, label)
    for m in PATH_METRICS:
        if m.cost(a) <= m.cost(b):
            assert m.cost(a2) <= m.cost(b2)


@given(sig_st, sig_st)
@LAWS
def test_dominance_implies_fidelity_order(a, b):
    if a.gamma >= b.gamma and a.t <= b.t and a.inv_sigma <= b.inv_sigma:
        assert contract(a).F >= contract(b).F


def test_collapsed_fidelity_not_isotone(witness_net):
    longer, direct = ["s", "a", "u"], ["s", "u"]
    F1 = contract(path_signature(witness_net, longer)).F
    F2 = contract(path_signature(witness_net, direct)).F
    F1x = contract(path_signature(witness_net, longer + ["v"])).F
    F2x = contract(path_signature(witness_net, direct + ["v"])).F
    assert F1 == pytest.approx(0.9050247558262688, abs=1e-12)
    assert F2 == pytest.approx(0.9000010319686385, abs=1e-12)
    assert F1x == pytest.approx(0.7872887558349011, abs=1e-12)
    assert F2x == pytest.approx(0.794736548395271, abs=1e-12)
    assert F1 >= F2 and F1x < F2x
