"""Canonical-form bookkeeping shared by MPS and MPO states.

A chain stores site tensors of shape ``(chi_left, *phys, chi_right)``. All
gauge operations act on the fused view ``(chi_left, prod(phys), chi_right)``,
so the density-operator chain reuses the pure-state machinery with a fused
physical index of extent 4.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

import numpy as np

from .tensor import contract, split_qr, split_svd

DEGENERACY_RTOL = 1e-12


class CanonicalFormError(RuntimeError):
    """Operation needs the canonical center somewhere else."""


@dataclass(frozen=True)
class TruncationRecord:
    gate_index: int
    bond_site: int
    chi_before: int
    chi_after: int
    target_f: float
    achieved_f: float
    discarded_weight: float
    capped: bool = False

    def as_row(self) -> dict:
        return {
            "gate_index": self.gate_index,
            "bond_site": self.bond_site,
            "chi_before": self.chi_before,
            "chi_after": self.chi_after,
            "target_f": self.target_f,
            "achieved_f": self.achieved_f,
            "capped": self.capped,
        }


def select_rank(curve: np.ndarray, s: np.ndarray, target: float, chi_cap: int | None = None):
    """Pick the kept rank from a cumulative fidelity curve.

    ``curve[k - 1]`` is the fidelity of keeping the ``k`` largest values and
    must end at exactly 1. Returns ``(k, achieved, capped)``.
    """
    if not 0.0 < target <= 1.0:
        raise ValueError(f"target fidelity must be in (0, 1], got {target}")
    n = len(curve)
    k = min(int(np.searchsorted(curve, target, side="left")) + 1, n)
    # keep degenerate multiplets whole
    while k < n and s[k] >= s[k - 1] * (1.0 - DEGENERACY_RTOL):
        k += 1
    capped = False
    if chi_cap is not None and k > chi_cap:
        k = chi_cap
        capped = True
    return k, float(curve[k - 1]), capped


def cumulative_weight(s: np.ndarray) -> np.ndarray:
    """Fraction of squared weight kept at each rank; last entry is exactly 1."""
    w = np.cumsum(np.asarray(s, dtype=float) ** 2)
    if w[-1] <= 0.0:
        raise ValueError("singular values are all zero")
    w /= w[-1]
    w[-1] = 1.0
    return w


class CanonicalChain:
    """Site tensors with a single canonical center."""

    phys_shape: tuple[int, ...] = (2,)

    def __init__(self, sites, center: int = 0):
        self.sites = [np.asarray(t, dtype=np.complex128) for t in sites]
        if not self.sites:
            raise ValueError("a chain needs at least one site")
        for i, t in enumerate(self.sites):
            if t.ndim != 2 + len(self.phys_shape) or t.shape[1:-1] != self.phys_shape:
                raise ValueError(f"site {i} has shape {t.shape}, expected (chi, {self.phys_shape}, chi)")
            if i and self.sites[i - 1].shape[-1] != t.shape[0]:
                raise ValueError(f"bond mismatch between sites {i - 1} and {i}")
        if self.sites[0].shape[0] != 1 or self.sites[-1].shape[-1] != 1:
            raise ValueError("boundary bonds must have extent 1")
        self._check_site(center)
        self.center = center

    @property
    def n_qubits(self) -> int:
        return len(self.sites)

    @property
    def d(self) -> int:
        return int(np.prod(self.phys_shape))

    def bond_dims(self) -> list[int]:
        return [t.shape[-1] for t in self.sites[:-1]]

    def max_bond(self) -> int:
        return max(self.bond_dims(), default=1)

    def copy(self):
        return copy.deepcopy(self)

    def _check_site(self, i: int):
        if not 0 <= i < len(self.sites):
            raise IndexError(f"site {i} outside [0, {len(self.sites)})")

    def _fused(self, i: int) -> np.ndarray:
        t = self.sites[i]
        return t.reshape(t.shape[0], self.d, t.shape[-1])

    def _store(self, i: int, t: np.ndarray):
        self.sites[i] = t.reshape(t.shape[0], *self.phys_shape, t.shape[-1])

    def canonicalize(self, new_center: int):
        """Move the center by QR sweeps; the represented state is unchanged."""
        self._check_site(new_center)
        while self.center < new_center:
            c = self.center
            q, r = split_qr(self._fused(c), (0, 1), side="left")
            self._store(c, q)
            self._store(c + 1, contract(r, self._fused(c + 1), [(1, 0)]))
            self.center += 1
        while self.center > new_center:
            c = self.center
            l, q = split_qr(self._fused(c), (0,), side="right")
            self._store(c, q)
            self._store(c - 1, contract(self._fused(c - 1), l, [(2, 0)]))
            self.center -= 1
        return self

    def canonical_errors(self) -> list[float]:
        """Per-site deviation of the flank tensors from isometries (0 at center)."""
        errs = []
        for i in range(self.n_qubits):
            a = self._fused(i)
            if i < self.center:
                g = contract(a.conj(), a, [(0, 0), (1, 1)])
            elif i > self.center:
                g = contract(a, a.conj(), [(1, 1), (2, 2)])
            else:
                errs.append(0.0)
                continue
            errs.append(float(np.max(np.abs(g - np.eye(g.shape[0])))))
        return errs

    def center_norm(self) -> float:
        return float(np.linalg.norm(self.sites[self.center]))

    def _prepare_pair(self, left: int):
        if not 0 <= left < self.n_qubits - 1:
            raise IndexError(f"pair ({left}, {left + 1}) outside a {self.n_qubits}-site chain")
        if self.center not in (left, left + 1):
            self.canonicalize(left)

    def _merge(self, left: int) -> np.ndarray:
        a, b = self._fused(left), self._fused(left + 1)
        return contract(a, b, [(2, 0)])  # (chi_l, d, d, chi_r)

    def _bond_values(self, bond: int) -> np.ndarray:
        if self.center == bond:
            return split_svd(self._fused(bond), (0, 1)).s
        if self.center == bond + 1:
            return split_svd(self._fused(bond + 1), (0,)).s
        raise CanonicalFormError(f"center {self.center} is not adjacent to bond {bond}")

    def _split(self, left: int, theta: np.ndarray, curve_fn, target: float, chi_cap, gate_index: int):
        """SVD-split a two-site tensor, truncate, and leave the center at ``left + 1``.

        ``curve_fn`` maps singular values to the cumulative fidelity curve.
        Kept singular values are rescaled so the chain keeps its norm.
        """
        res = split_svd(theta, (0, 1))
        s = res.s
        k, achieved, capped = select_rank(curve_fn(s), s, target, chi_cap)
        total = float(np.sum(s**2))
        kept = float(np.sum(s[:k] ** 2))
        s_new = s[:k] * np.sqrt(total / kept)
        self._store(left, res.u[..., :k])
        self._store(left + 1, s_new[:, None, None] * res.vh[:k])
        self.center = left + 1
        return TruncationRecord(
            gate_index=gate_index,
            bond_site=left,
            chi_before=len(s),
            chi_after=k,
            target_f=float(target),
            achieved_f=achieved,
            discarded_weight=1.0 - kept / total,
            capped=capped,
        ), kept / total
