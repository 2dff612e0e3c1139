import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entroute import oracle
from entroute.ghz import star_fidelity

fid = st.floats(0.25, 1.0, exclude_min=True)


def random_state(rng, n):
    a = rng.normal(size=(1 << n, 1 << n)) + 1j * rng.normal(size=(1 << n, 1 << n))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def test_ghz_basics():
    assert np.allclose(oracle.ghz(2), oracle.bell())
    g3 = oracle.ghz(3)
    eig = np.linalg.eigvalsh(g3)
    assert abs(eig[-1] - 1) < 1e-12 and np.sum(np.abs(eig) > 1e-12) == 1
    for T in range(2, 7):
        assert oracle.fidelity(oracle.ghz(T), oracle.ghz(T)) == pytest.approx(1, abs=1e-12)
    with pytest.raises(oracle.OracleError):
        oracle.ghz(7)
    with pytest.raises(oracle.OracleError):
        oracle.ghz(1)


def test_density_matrix_invariants():
    rho = oracle.depolarize(oracle.depolarize(oracle.ghz(4), 1, 0.7), 3, 0.4)
    assert np.allclose(rho, rho.conj().T, atol=1e-12)
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(rho).min() > -1e-10


def test_depolarize_identity_and_floor():
    g = oracle.ghz(3)
    assert np.allclose(oracle.depolarize(g, 1, 1.0), g, atol=1e-15)
    for q in range(3):
        assert oracle.fidelity(oracle.depolarize(g, q, 0.25), g) == pytest.approx(0.25, abs=1e-12)
    with pytest.raises(oracle.OracleError):
        oracle.depolarize(g, 3, 0.5)


def test_maximally_mixed_fidelity():
    assert oracle.fidelity(oracle.maximally_mixed(3), oracle.ghz(3)) == pytest.approx(1 / 8, abs=1e-12)


def test_fidelity_rejects_mixed_target():
    with pytest.raises(oracle.OracleError):
        oracle.fidelity(oracle.ghz(2), oracle.maximally_mixed(2))


def test_three_095_branches():
    assert oracle.star_oracle([0.95] * 3) == pytest.approx(0.858185185185185, abs=1e-12)


@given(st.integers(0, 2**32 - 1), st.floats(0, 1), st.floats(0, 1))
@settings(max_examples=60, deadline=None)
def test_channels_commute(seed, p, q):
    rho = random_state(np.random.default_rng(seed), 3)
    a = oracle.depolarize(oracle.depolarize(rho, 0, p), 1, q)
    b = oracle.depolarize(oracle.depolarize(rho, 1, q), 0, p)
    assert np.allclose(a, b, atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
@settings(max_examples=60, deadline=None)
def test_trace_and_linearity(seed, p1, p2, alpha):
    rho = random_state(np.random.default_rng(seed), 3)
    out = oracle.depolarize(rho, 2, p1)
    assert abs(np.trace(out) - 1) <= 1e-12
    mix = oracle.depolarize(rho, 2, alpha * p1 + (1 - alpha) * p2)
    lin = alpha * oracle.depolarize(rho, 2, p1) + (1 - alpha) * oracle.depolarize(rho, 2, p2)
    assert np.allclose(mix, lin, atol=1e-12)


@given(st.integers(0, 2**32 - 1), st.floats(0, 1), st.integers(0, 2))
@settings(max_examples=60, deadline=None)
def test_partial_transpose_form_agrees(seed, p, q):
    rho = random_state(np.random.default_rng(seed), 3)
    assert np.allclose(oracle.depolarize(rho, q, p), oracle.depolarize_pt(rho, q, p), atol=1e-12)


@given(fid)
def test_werner_consistency(F):
    b = oracle.bell()
    one, two = oracle.depolarize(b, 0, F), oracle.depolarize(b, 1, F)
    assert np.allclose(one, two, atol=1e-12)
    assert oracle.fidelity(one, b) == pytest.approx(F, abs=1e-12)
    assert np.allclose(one, oracle.werner((4 * F - 1) / 3), atol=1e-12)


@given(st.lists(fid, min_size=2, max_size=5))
@settings(max_examples=200, deadline=None)
def test_star_oracle_matches_closed_form(Fs):
    assert oracle.star_oracle(Fs) == pytest.approx(star_fidelity(Fs), abs=1e-12)


def test_tree_oracle_two_steiner():
    # Terminals a, b on hub s; c, d on hub r; s-r link; tau0 = a.
    got = oracle.tree_oracle([None, 0.9, 0.92, 0.99], [0.95, 0.97], 0)
    E = (1 + 2 * 0.95) / 3 * (1 + 2 * 0.97) / 3 + 2 * 0.05 / 3 * 2 * 0.03 / 3
    O = 1 - E
    A = np.prod([(1 + 2 * F) / 3 for F in (0.9, 0.92, 0.99)])
    B = np.prod([2 * (1 - F) / 3 for F in (0.9, 0.92, 0.99)])
    C = np.prod([(4 * F - 1) / 3 for F in (0.9, 0.92, 0.99, 0.95, 0.97)])
    assert got == pytest.approx(0.5 * (E * A + O * B + C), abs=1e-12)
    with pytest.raises(oracle.OracleError):
        oracle.star_oracle([0.9] * 7)
