"""Dense density-matrix simulator used to check the closed-form fidelities.

Qubit 0 is the most significant bit of the computational-basis index. Sizes are
capped at ``MAX_QUBITS``; this is a verification tool, not a simulator.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

MAX_QUBITS = 6

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


class OracleError(ValueError):
    pass


def num_qubits(rho: np.ndarray) -> int:
    n = int(rho.shape[0]).bit_length() - 1
    if rho.shape != (1 << n, 1 << n):
        raise OracleError(f"not a multi-qubit density matrix: shape {rho.shape}")
    return n


def ghz(T: int) -> np.ndarray:
    """Projector onto (|0...0> + |1...1>)/sqrt(2)."""
    if not 2 <= T <= MAX_QUBITS:
        raise OracleError(f"GHZ size {T} outside [2, {MAX_QUBITS}]")
    psi = np.zeros(1 << T, dtype=complex)
    psi[0] = psi[-1] = 1 / np.sqrt(2)
    return np.outer(psi, psi.conj())


def bell() -> np.ndarray:
    return ghz(2)


def maximally_mixed(T: int) -> np.ndarray:
    return np.eye(1 << T, dtype=complex) / (1 << T)


def werner(gamma: float) -> np.ndarray:
    """gamma |phi+><phi+| + (1 - gamma) * identity / 4."""
    return gamma * bell() + (1 - gamma) * maximally_mixed(2)


def local_operator(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    if not 0 <= qubit < n:
        raise OracleError(f"qubit index {qubit} out of range for {n} qubits")
    return np.kron(np.kron(np.eye(1 << qubit), op), np.eye(1 << (n - qubit - 1)))


def depolarize(rho: np.ndarray, qubit: int, p: float) -> np.ndarray:
    """p * rho + (1 - p)/3 * (X rho X + Y rho Y + Z rho Z) on one qubit."""
    n = num_qubits(rho)
    if not 0.0 <= p <= 1.0:
        raise OracleError(f"channel parameter {p} outside [0, 1]")
    out = p * rho
    for pauli in (X, Y, Z):
        P = local_operator(pauli, qubit, n)
        out = out + (1 - p) / 3 * (P @ rho @ P.conj().T)
    return out


def partial_transpose(rho: np.ndarray, qubit: int) -> np.ndarray:
    n = num_qubits(rho)
    if not 0 <= qubit < n:
        raise OracleError(f"qubit index {qubit} out of range for {n} qubits")
    t = rho.reshape([2] * (2 * n))
    t = np.swapaxes(t, qubit, n + qubit)
    return t.reshape(rho.shape)


def depolarize_pt(rho: np.ndarray, qubit: int, p: float) -> np.ndarray:
    """Same channel written as (1+2p)/3 rho + 2(1-p)/3 PT_q(Y rho Y)."""
    n = num_qubits(rho)
    Yq = local_operator(Y, qubit, n)
    return (1 + 2 * p) / 3 * rho + 2 * (1 - p) / 3 * partial_transpose(Yq @ rho @ Yq.conj().T, qubit)


def fidelity(rho: np.ndarray, pure_target: np.ndarray) -> float:
    """<psi| rho |psi> for a rank-one projector target."""
    eig = np.linalg.eigvalsh(pure_target)
    if np.sum(eig > 1e-9) != 1 or abs(eig[-1] - 1.0) > 1e-9:
        raise OracleError("fidelity target must be a pure-state projector")
    value = float(np.real(np.trace(rho @ pure_target)))
    return min(1.0, max(0.0, value))


def star_oracle(branch_F: Sequence[float]) -> float:
    """GHZ fidelity with one depolarising channel per terminal qubit."""
    T = len(branch_F)
    if T > MAX_QUBITS:
        raise OracleError(f"{T} qubits exceeds the oracle limit of {MAX_QUBITS}")
    target = ghz(T)
    rho = target
    for q, F in enumerate(branch_F):
        rho = depolarize(rho, q, F)
    return fidelity(rho, target)


def tree_oracle(terminal_F: Sequence[float | None], steiner_F: Sequence[float], tau0: int = 0) -> float:
    """Tree-scheme fidelity from its channel placement.

    ``terminal_F[q]`` acts on qubit ``q`` for every ``q != tau0`` (the entry at
    ``tau0`` is ignored); each value of ``steiner_F`` is a further channel on
    qubit ``tau0``.
    """
    T = len(terminal_F)
    if T > MAX_QUBITS:
        raise OracleError(f"{T} qubits exceeds the oracle limit of {MAX_QUBITS}")
    target = ghz(T)
    rho = target
    for q, F in enumerate(terminal_F):
        if q != tau0:
            rho = depolarize(rho, q, F)
    for F in steiner_F:
        rho = depolarize(rho, tau0, F)
    return fidelity(rho, target)
