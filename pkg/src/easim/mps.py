"""Pure-state simulation with matrix product states."""

from __future__ import annotations

import math

import numpy as np

from .budget import FidelityLedger
from .chain import CanonicalChain, TruncationRecord, cumulative_weight, select_rank
from .circuit import UNITARY_TOL, unitarity_error

NORM_TOL = 1e-8
HERMITIAN_TOL = 1e-10


def _check_unitary(m: np.ndarray, dim: int) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} gate, got shape {m.shape}")
    if unitarity_error(m) > UNITARY_TOL:
        raise ValueError("gate is not unitary")
    return m


def _check_hermitian(obs: np.ndarray) -> np.ndarray:
    obs = np.asarray(obs, dtype=np.complex128)
    if obs.ndim != 2 or obs.shape[0] != obs.shape[1] or obs.shape[0] not in (2, 4):
        raise ValueError(f"observable must be 2x2 or 4x4, got shape {obs.shape}")
    if np.max(np.abs(obs - obs.conj().T)) > HERMITIAN_TOL:
        raise ValueError("observable is not Hermitian")
    return obs


def truncation_rank_pure(lam, target_f: float) -> tuple[int, float]:
    """Smallest rank whose kept squared weight reaches ``target_f``.

    For a normalized state in canonical form, cutting the Schmidt spectrum to
    the ``k`` largest values and renormalizing gives overlap fidelity
    ``sum(lam[:k] ** 2)``.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or len(lam) == 0 or np.any(lam < 0):
        raise ValueError("singular values must be a nonempty non-negative vector")
    if abs(float(np.sum(lam**2)) - 1.0) > NORM_TOL:
        raise ValueError(f"singular values are not normalized: sum of squares = {np.sum(lam**2)!r}")
    k, achieved, _ = select_rank(cumulative_weight(lam), lam, target_f)
    return k, achieved


class MpsState(CanonicalChain):
    """Chain of ``(chi_left, 2, chi_right)`` tensors representing a pure state."""

    phys_shape = (2,)

    def __init__(self, sites, center: int = 0, norm_log: float = 0.0):
        super().__init__(sites, center)
        self.norm_log = norm_log

    def norm(self) -> float:
        return math.sqrt(abs(overlap(self, self)))

    def schmidt_values(self, bond: int) -> np.ndarray:
        """Schmidt spectrum across ``(bond, bond + 1)``; center must be adjacent."""
        if not 0 <= bond < self.n_qubits - 1:
            raise IndexError(f"bond {bond} outside [0, {self.n_qubits - 1})")
        return self._bond_values(bond)

    def apply_1q(self, gate, site: int):
        gate = _check_unitary(gate, 2)
        self._check_site(site)
        self.sites[site] = np.einsum("ij,ajb->aib", gate, self.sites[site])
        return self

    def apply_2q(
        self,
        gate,
        left_site: int,
        budget: FidelityLedger | None = None,
        chi_cap: int | None = None,
        gate_index: int = -1,
    ) -> TruncationRecord:
        """Apply a gate on ``(left_site, left_site + 1)`` and truncate the new bond.

        The target comes from ``budget`` (exact when no ledger is given). A
        ``chi_cap`` smaller than the rank required by the target wins and the
        record is flagged as capped.
        """
        gate = _check_unitary(gate, 4)
        self._prepare_pair(left_site)
        theta = self._merge(left_site)
        theta = np.einsum("ijkl,aklb->aijb", gate.reshape(2, 2, 2, 2), theta)
        target = budget.next_target() if budget is not None else 1.0
        rec, kept = self._split(left_site, theta, cumulative_weight, target, chi_cap, gate_index)
        self.norm_log += 0.5 * math.log(kept)
        if budget is not None:
            budget.record(rec.achieved_f, target, rec.capped)
        return rec

    def amplitude(self, bits) -> complex:
        bits = [int(b) for b in bits]
        if len(bits) != self.n_qubits:
            raise ValueError(f"bitstring has length {len(bits)}, state has {self.n_qubits} qubits")
        v = np.ones((1,), dtype=np.complex128)
        for t, b in zip(self.sites, bits):
            v = v @ t[:, b, :]
        return complex(v[0])

    def to_dense(self) -> np.ndarray:
        """Full state vector, qubit 0 most significant."""
        v = self.sites[0].reshape(2, -1)
        for t in self.sites[1:]:
            v = (v @ t.reshape(t.shape[0], -1)).reshape(-1, t.shape[-1])
        return v.reshape(-1)

    def expectation_local(self, obs, left_site: int) -> float:
        """``<psi|O|psi>`` for a one-site (2x2) or two-site (4x4) observable."""
        obs = _check_hermitian(obs)
        k = 1 if obs.shape[0] == 2 else 2
        self._check_site(left_site + k - 1)
        if self.center in range(left_site, left_site + k):
            theta = self.sites[left_site] if k == 1 else self._merge(left_site)
            chi_l, chi_r = theta.shape[0], theta.shape[-1]
            m = theta.reshape(chi_l, -1, chi_r)
            val = np.einsum("aib,ij,ajb->", m.conj(), obs, m)
        else:
            val = _sandwich(self, obs, left_site)
        return float(val.real)


def _sandwich(state: MpsState, obs: np.ndarray, left: int) -> complex:
    """Full transfer contraction of ``<psi|O|psi>`` ignoring the gauge."""
    k = 1 if obs.shape[0] == 2 else 2
    env = np.ones((1, 1), dtype=np.complex128)
    i = 0
    while i < state.n_qubits:
        if i == left:
            t = state.sites[i] if k == 1 else state._merge(i)
            m = t.reshape(t.shape[0], -1, t.shape[-1])
            env = np.einsum("ab,aic,ij,bjd->cd", env, m.conj(), obs, m)
            i += k
        else:
            t = state.sites[i]
            env = np.einsum("ab,aic,bid->cd", env, t.conj(), t)
            i += 1
    return complex(env[0, 0])


def init_product_state(n_qubits: int) -> MpsState:
    if n_qubits < 1:
        raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
    site = np.zeros((1, 2, 1), dtype=np.complex128)
    site[0, 0, 0] = 1.0
    return MpsState([site.copy() for _ in range(n_qubits)], center=0)


def overlap(a: MpsState, b: MpsState) -> complex:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    env = np.ones((1, 1), dtype=np.complex128)
    for x, y in zip(a.sites, b.sites):
        env = np.einsum("ab,aic,bid->cd", env, x.conj(), y)
    return complex(env[0, 0])


def fidelity_pure(a: MpsState, b: MpsState) -> float:
    return abs(overlap(a, b)) ** 2
