"""Brute-force dense simulators used as ground truth for small systems."""

from __future__ import annotations

import itertools

import numpy as np

from .circuit import PAULIS, Circuit, GateOp

PURE_CAP = 12
MIXED_CAP = 7


class OracleCapError(MemoryError):
    """System too large for the dense oracle."""


def _check_cap(n: int, cap: int):
    if n > cap:
        raise OracleCapError(f"{n} qubits exceeds the dense oracle cap of {cap}")


def apply_dense_gate(psi: np.ndarray, op: GateOp, n: int) -> np.ndarray:
    """Apply a gate to a vector of shape ``(2,) * n``."""
    k = op.n_sites
    u = op.matrix.reshape((2,) * (2 * k))
    out = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(op.sites)))
    # tensordot puts the gate's output axes first; move them back in place
    return np.moveaxis(out, list(range(k)), list(op.sites))


def _apply_left_right(rho: np.ndarray, mats: list[np.ndarray], sites, n: int) -> np.ndarray:
    """``K rho K^dag`` for a local operator ``K`` on ``sites`` of an ``(2,) * 2n`` tensor."""
    k = len(sites)
    out = np.zeros_like(rho)
    for m in mats:
        m = m.reshape((2,) * (2 * k))
        t = np.tensordot(m, rho, axes=(list(range(k, 2 * k)), list(sites)))
        t = np.moveaxis(t, list(range(k)), list(sites))
        cols = [n + s for s in sites]
        t = np.tensordot(m.conj(), t, axes=(list(range(k, 2 * k)), cols))
        out += np.moveaxis(t, list(range(k)), cols)
    return out


def depolarize_dense(rho: np.ndarray, sites, eps: float, n: int) -> np.ndarray:
    k = len(sites)
    paulis = []
    for ps in itertools.product(range(4), repeat=k):
        if any(ps):
            m = PAULIS[ps[0]]
            for p in ps[1:]:
                m = np.kron(m, PAULIS[p])
            paulis.append(m)
    mixed = _apply_left_right(rho, paulis, sites, n)
    return (1.0 - eps) * rho + eps / (4**k - 1) * mixed


def dense_run(circuit: Circuit, max_qubits: int = PURE_CAP) -> np.ndarray:
    """Exact output vector from ``|0...0>``, qubit 0 most significant."""
    n = circuit.n_qubits
    _check_cap(n, max_qubits)
    psi = np.zeros((2,) * n, dtype=np.complex128)
    psi[(0,) * n] = 1.0
    for op in circuit.ops:
        psi = apply_dense_gate(psi, op, n)
    return psi.reshape(-1)


def dense_run_noisy(circuit: Circuit, noise, max_qubits: int = MIXED_CAP) -> np.ndarray:
    """Exact density matrix with a depolarizing channel after every gate."""
    n = circuit.n_qubits
    _check_cap(n, max_qubits)
    rho = np.zeros((2,) * (2 * n), dtype=np.complex128)
    rho[(0,) * (2 * n)] = 1.0
    for op in circuit.ops:
        rho = _apply_left_right(rho, [op.matrix], op.sites, n)
        eps = noise.eps1 if op.kind == "1q" else noise.eps2
        if eps:
            rho = depolarize_dense(rho, op.sites, eps, n)
    return rho.reshape(2**n, 2**n)


def dense_fidelity_pure(a: np.ndarray, b: np.ndarray) -> float:
    a, b = np.ravel(a), np.ravel(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(abs(np.vdot(a, b)) ** 2)


def dense_fidelity_wang(rho: np.ndarray, sigma: np.ndarray) -> float:
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {rho.shape} vs {sigma.shape}")
    num = abs(np.trace(rho @ sigma))
    den = np.sqrt(abs(np.trace(rho @ rho)) * abs(np.trace(sigma @ sigma)))
    return float(num / den)
