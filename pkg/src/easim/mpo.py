"""Mixed-state simulation with matrix product density operators.

Site tensors have axes ``(chi_left, sigma, sigma', chi_right)`` so that
``rho = sum A[sigma_1, sigma'_1] ... |sigma><sigma'|``. Gates and channels act
as superoperators on the fused ``(sigma, sigma')`` index; canonical form is
taken with respect to the Hilbert-Schmidt inner product, which makes the
center-bond singular values the spectrum of ``rho`` viewed as a vector.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .budget import FidelityLedger
from .chain import CanonicalChain, TruncationRecord, cumulative_weight, select_rank
from .circuit import PAULIS
from .mps import _check_hermitian, _check_unitary


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing strengths after one-qubit (``eps1``) and two-qubit (``eps2``) gates."""

    eps1: float = 0.0
    eps2: float = 0.0

    def __post_init__(self):
        for name in ("eps1", "eps2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")

    @property
    def is_noisy(self) -> bool:
        return self.eps1 > 0 or self.eps2 > 0


def wang_curve(s: np.ndarray) -> np.ndarray:
    """Mixed-state truncation fidelity ``sqrt(kept weight / total weight)`` per rank."""
    return np.sqrt(cumulative_weight(s))


def truncation_rank_mixed(lam, target_f: float) -> tuple[int, float]:
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or len(lam) == 0:
        raise ValueError("singular values must be a nonempty vector")
    if np.any(lam < 0):
        raise ValueError("singular values must be non-negative")
    k, achieved, _ = select_rank(wang_curve(lam), lam, target_f)
    return k, achieved


def unitary_superop(u: np.ndarray) -> np.ndarray:
    """``rho -> U rho U^dag`` acting on ``vec(rho)`` with row-index major."""
    return np.kron(u, u.conj())


def depolarizing_superop(k: int, eps: float) -> np.ndarray:
    """Uniform Pauli channel ``(1 - eps) rho + eps / (4^k - 1) sum_{P != I} P rho P``."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must be in [0, 1], got {eps}")
    dim = 2**k
    out = (1.0 - eps) * np.eye(dim * dim, dtype=np.complex128)
    w = eps / (4**k - 1)
    for ps in itertools.product(PAULIS, repeat=k):
        if all(p is PAULIS[0] for p in ps):
            continue
        p = ps[0] if k == 1 else np.kron(*ps)
        out += w * np.kron(p, p.conj())
    return out


class MpoState(CanonicalChain):
    """Chain of ``(chi_left, 2, 2, chi_right)`` tensors representing a density operator."""

    phys_shape = (2, 2)

    def __init__(self, sites, center: int = 0, trace_log: float = 0.0):
        super().__init__(sites, center)
        self.trace_log = trace_log

    # -- observables ----------------------------------------------------------

    def trace(self) -> float:
        return float(_trace_with(self, {}).real)

    def purity(self) -> float:
        """``Tr(rho^2)`` of the trace-normalized state, read off the canonical center."""
        return self.center_norm() ** 2 / self.trace() ** 2

    def expectation_mpo(self, obs, sites) -> float:
        obs = _check_hermitian(obs)
        sites = tuple(sites)
        k = len(sites)
        if obs.shape[0] != 2**k or (k == 2 and sites[1] != sites[0] + 1):
            raise ValueError(f"observable of shape {obs.shape} does not fit sites {sites}")
        for s in sites:
            self._check_site(s)
        if k == 1:
            num = _trace_with(self, {sites[0]: obs})
        else:
            num = _trace_with(self, {sites[0]: obs}, pair=True)
        return float((num / _trace_with(self, {})).real)

    def to_dense(self) -> np.ndarray:
        """Dense ``2^n x 2^n`` density matrix, qubit 0 most significant."""
        n = self.n_qubits
        t = self.sites[0]
        for s in self.sites[1:]:
            t = np.tensordot(t, s, axes=([t.ndim - 1], [0]))
        t = t.reshape((2, 2) * n)
        perm = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
        return t.transpose(perm).reshape(2**n, 2**n)

    # -- evolution ------------------------------------------------------------

    def _rescale_trace(self):
        tr = self.trace()
        if not tr > 0:
            raise ArithmeticError(f"density operator trace became {tr}")
        self.sites[self.center] = self.sites[self.center] / tr
        self.trace_log += math.log(tr)

    def apply_superop_1q(self, superop: np.ndarray, site: int, move_center: bool = True):
        """Apply a 4x4 superoperator on one site's fused ``(sigma, sigma')`` index."""
        self._check_site(site)
        if move_center:
            self.canonicalize(site)
        t = self._fused(site)
        self._store(site, np.einsum("ij,ajb->aib", superop, t))
        return self

    def apply_superop_2q(
        self,
        superop: np.ndarray,
        left: int,
        budget: FidelityLedger | None = None,
        chi_cap: int | None = None,
        gate_index: int = -1,
    ) -> TruncationRecord:
        """Apply a 16x16 superoperator on ``(left, left + 1)`` and truncate.

        ``superop`` acts on ``vec`` ordered ``(s1, s2, s1', s2')``.
        """
        self._prepare_pair(left)
        theta = self._merge(left)  # (a, s1 s1', s2 s2', b)
        a, b = theta.shape[0], theta.shape[-1]
        theta = theta.reshape(a, 2, 2, 2, 2, b).transpose(0, 1, 3, 2, 4, 5).reshape(a, 16, b)
        theta = np.einsum("ij,ajb->aib", superop, theta)
        theta = theta.reshape(a, 2, 2, 2, 2, b).transpose(0, 1, 3, 2, 4, 5).reshape(a, 4, 4, b)
        target = budget.next_target() if budget is not None else 1.0
        rec, _ = self._split(left, theta, wang_curve, target, chi_cap, gate_index)
        self._rescale_trace()
        if budget is not None:
            budget.record(rec.achieved_f, target, rec.capped)
        return rec

    def apply_unitary_mpo(self, gate, sites, budget=None, chi_cap=None, gate_index=-1):
        """``rho -> U rho U^dag``; returns a truncation record for two-qubit gates."""
        sites = tuple(sites)
        if len(sites) == 1:
            u = _check_unitary(gate, 2)
            # unitary conjugation is an isometry of the HS inner product: gauge is kept
            self.apply_superop_1q(unitary_superop(u), sites[0], move_center=False)
            return None
        if sites[1] != sites[0] + 1:
            raise ValueError(f"sites {sites} must be an ascending adjacent pair")
        u = _check_unitary(gate, 4)
        return self.apply_superop_2q(unitary_superop(u), sites[0], budget, chi_cap, gate_index)

    def apply_depolarizing(self, sites, eps: float, budget=None, chi_cap=None, gate_index=-1):
        sites = tuple(sites)
        if len(sites) not in (1, 2) or (len(sites) == 2 and sites[1] != sites[0] + 1):
            raise ValueError(f"depolarizing needs one site or an ascending adjacent pair, got {sites}")
        sup = depolarizing_superop(len(sites), eps)
        if len(sites) == 1:
            self.apply_superop_1q(sup, sites[0])
            return None
        return self.apply_superop_2q(sup, sites[0], budget, chi_cap, gate_index)


def _site_trace(t: np.ndarray, op: np.ndarray | None) -> np.ndarray:
    """Transfer matrix ``sum_{s, s'} A[s, s'] op[s', s]`` (identity when ``op`` is None)."""
    if op is None:
        return np.einsum("aiib->ab", t)
    return np.einsum("aijb,ji->ab", t, op)


def _trace_with(state: MpoState, ops: dict, pair: bool = False) -> complex:
    env = np.ones((1,), dtype=np.complex128)
    i = 0
    while i < state.n_qubits:
        if pair and i in ops:
            theta = state._merge(i)  # (a, s1 s1', s2 s2', b)
            a, b = theta.shape[0], theta.shape[-1]
            theta = theta.reshape(a, 2, 2, 2, 2, b).transpose(0, 1, 3, 2, 4, 5).reshape(a, 4, 4, b)
            env = env @ _site_trace(theta, ops[i])
            i += 2
            continue
        env = env @ _site_trace(state.sites[i], ops.get(i))
        i += 1
    return complex(env[0])


def init_density_product(n_qubits: int) -> MpoState:
    if n_qubits < 1:
        raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
    site = np.zeros((1, 2, 2, 1), dtype=np.complex128)
    site[0, 0, 0, 0] = 1.0
    return MpoState([site.copy() for _ in range(n_qubits)], center=0)


def trace_product(a: MpoState, b: MpoState) -> complex:
    """``Tr(rho sigma)`` by a left-to-right transfer contraction."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    env = np.ones((1, 1), dtype=np.complex128)
    for x, y in zip(a.sites, b.sites):
        env = np.einsum("ab,aijc,bjid->cd", env, x, y)
    return complex(env[0, 0])


def fidelity_wang(a: MpoState, b: MpoState) -> float:
    """``|Tr(rho sigma)| / sqrt(Tr(rho^2) Tr(sigma^2))``; scale invariant."""
    num = abs(trace_product(a, b))
    den = math.sqrt(abs(trace_product(a, a)) * abs(trace_product(b, b)))
    return num / den
