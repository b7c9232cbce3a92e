"""Dense complex tensor primitives: contraction and SVD/QR splits.

Tensors are plain ``numpy`` arrays of dtype ``complex128`` in C (row-major)
order. Every factorization here works by fusing a chosen set of axes into
the row index of a matrix and the remaining axes into the column index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

DTYPE = np.complex128

# s_i < ZERO_TOL * s_0 is treated as an exact zero when counting rank.
ZERO_TOL = 1e-14


class DimensionError(ValueError):
    """Raised when paired axes have different extents."""


class NumericalError(ArithmeticError):
    """Raised when a factorization fails to converge."""


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``t = u @ diag(s) @ vh`` with the split axes restored.

    ``u`` has shape ``left_extents + (r,)`` and ``vh`` has shape
    ``(r,) + right_extents``.
    """

    u: np.ndarray
    s: np.ndarray
    vh: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.s)


def as_tensor(data) -> np.ndarray:
    t = np.ascontiguousarray(data, dtype=DTYPE)
    if not np.all(np.isfinite(t)):
        raise ValueError("tensor contains NaN or Inf entries")
    return t


def contract(a: np.ndarray, b: np.ndarray, axis_pairs: Sequence[tuple[int, int]]) -> np.ndarray:
    """Sum over paired axes; free axes of ``a`` come first, then those of ``b``."""
    a_axes = [p[0] for p in axis_pairs]
    b_axes = [p[1] for p in axis_pairs]
    for i, j in axis_pairs:
        if a.shape[i] != b.shape[j]:
            raise DimensionError(
                f"axis {i} of a has extent {a.shape[i]} but axis {j} of b has extent {b.shape[j]}"
            )
    return np.tensordot(a, b, axes=(a_axes, b_axes))


def _as_matrix(t: np.ndarray, left_axes: Sequence[int]):
    left = [ax % t.ndim for ax in left_axes]
    if not left or len(set(left)) != len(left) or len(left) >= t.ndim:
        raise ValueError(f"left_axes {tuple(left_axes)} must be a nonempty proper subset of {t.ndim} axes")
    right = [ax for ax in range(t.ndim) if ax not in left]
    perm = left + right
    if perm != list(range(t.ndim)):
        t = t.transpose(perm)
    lshape = t.shape[: len(left)]
    rshape = t.shape[len(left):]
    mat = t.reshape(int(np.prod(lshape)), int(np.prod(rshape)))
    return mat, lshape, rshape


def svd_matrix(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD of a matrix, falling back to the slower gesvd driver."""
    try:
        return np.linalg.svd(mat, full_matrices=False)
    except np.linalg.LinAlgError:
        pass
    try:
        return scipy.linalg.svd(mat, full_matrices=False, lapack_driver="gesvd")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"SVD did not converge for matrix of shape {mat.shape}") from exc


def nonzero_rank(s: np.ndarray) -> int:
    """Number of singular values above the machine-zero threshold (at least 1)."""
    if len(s) == 0 or s[0] == 0.0:
        return 1
    return max(1, int(np.count_nonzero(s >= ZERO_TOL * s[0])))


def split_svd(t: np.ndarray, left_axes: Sequence[int]) -> SvdResult:
    mat, lshape, rshape = _as_matrix(t, left_axes)
    u, s, vh = svd_matrix(mat)
    r = nonzero_rank(s)
    u, s, vh = u[:, :r], s[:r], vh[:r, :]
    return SvdResult(u.reshape(*lshape, r), s, vh.reshape(r, *rshape))


def split_qr(t: np.ndarray, left_axes: Sequence[int], side: str = "left") -> tuple[np.ndarray, np.ndarray]:
    """Split ``t`` into two factors joined by a new bond.

    ``side="left"`` gives ``(Q, R)`` with ``Q`` left-normalized. ``side="right"``
    gives ``(L, Q)`` with ``Q`` right-normalized (an RQ-style split).
    """
    mat, lshape, rshape = _as_matrix(t, left_axes)
    try:
        if side == "left":
            q, r = np.linalg.qr(mat)
            k = q.shape[1]
            return q.reshape(*lshape, k), r.reshape(k, *rshape)
        if side == "right":
            q, r = np.linalg.qr(mat.conj().T)
            k = q.shape[1]
            return r.conj().T.reshape(*lshape, k), q.conj().T.reshape(k, *rshape)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"QR failed for tensor of shape {t.shape}") from exc
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")
