"""Dense exact linear algebra over a FieldSpec.

Matrices hold element codes in a 2-D int64 numpy array.  Elimination is
exact; pivoting takes the first nonzero entry top-to-bottom.  Absence of
a solution is reported as None, never as an exception.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ffield import FieldSpec


@dataclass
class FMatrix:
    field: FieldSpec
    data: np.ndarray  # 2-D int64 array of element codes

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.int64)
        if self.data.ndim != 2:
            raise ValueError("matrix data must be 2-D")
        if self.data.size and (self.data.min() < 0 or self.data.max() >= self.field.q):
            raise ValueError("entries must be element codes in [0, q)")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "FMatrix":
        return cls(field, np.array([list(r) for r in rows], dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def transpose(self) -> "FMatrix":
        return FMatrix(self.field, self.data.T.copy())

    def copy(self) -> "FMatrix":
        return FMatrix(self.field, self.data.copy())


def _eliminate(field: FieldSpec, R: np.ndarray, pivot_row: int, col: int):
    """Zero out column `col` in every row but `pivot_row` (pivot is 1)."""
    others = np.nonzero(R[:, col])[0]
    others = others[others != pivot_row]
    if others.size:
        factors = R[others, col]
        if field.ell == 1:
            R[others] = (R[others] - factors[:, None] * R[pivot_row][None, :]) % field.p
        else:
            prod = field.vmul(factors[:, None], R[pivot_row][None, :])
            R[others] = field.vsub(R[others], prod)


def rref(M: FMatrix) -> tuple[FMatrix, int, tuple[int, ...]]:
    """Reduced row echelon form; returns (R, rank, pivot columns)."""
    field = M.field
    R = M.data.copy()
    nrows, ncols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = field.inv(int(R[r, c]))
        if inv != 1:
            if field.ell == 1:
                R[r] = (R[r] * inv) % field.p
            else:
                R[r] = field.vmul(np.int64(inv), R[r])
        _eliminate(field, R, r, c)
        pivots.append(c)
        r += 1
    return FMatrix(field, R), len(pivots), tuple(pivots)


def rank(M: FMatrix) -> int:
    return rref(M)[1]


def matvec(M: FMatrix, v) -> np.ndarray:
    """M . v over the field."""
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (M.cols,):
        raise ValueError("vector length must equal column count")
    field = M.field
    if field.ell == 1:
        return (M.data @ v) % field.p
    return field.vsum(field.vmul(M.data, v[None, :]), axis=1)


def vecmat(v, M: FMatrix) -> np.ndarray:
    """v . M over the field (row-vector times matrix)."""
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (M.rows,):
        raise ValueError("vector length must equal row count")
    field = M.field
    if field.ell == 1:
        return (v @ M.data) % field.p
    return field.vsum(field.vmul(v[:, None], M.data), axis=0)


def column_kernel(M: FMatrix) -> list[np.ndarray]:
    """Basis of {v : M.v = 0}; each vector verified by multiplication."""
    R, rk, pivots = rref(M)
    field = M.field
    pivot_set = set(pivots)
    basis = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        v = np.zeros(M.cols, dtype=np.int64)
        v[free] = 1
        for j, c in enumerate(pivots):
            v[c] = field.neg(int(R.data[j, free]))
        assert not matvec(M, v).any(), "kernel vector failed verification"
        basis.append(v)
    assert len(basis) == M.cols - rk
    return basis


def express_in_rowspace(M: FMatrix, w) -> np.ndarray | None:
    """Coefficients x with x.M = w, or None if w is outside the row space.

    Any returned x is verified by recomputation.
    """
    w = np.asarray(w, dtype=np.int64)
    if w.shape != (M.cols,):
        raise ValueError("target length must equal column count")
    aug = np.concatenate([M.data.T, w[:, None]], axis=1)
    R, rk, pivots = rref(FMatrix(M.field, aug))
    if M.rows in pivots:  # pivot in the augmented column: inconsistent
        return None
    x = np.zeros(M.rows, dtype=np.int64)
    for j, c in enumerate(pivots):
        x[c] = R.data[j, M.rows]
    assert np.array_equal(vecmat(x, M), w), "row-space solution failed check"
    return x


def inverse(M: FMatrix) -> FMatrix | None:
    """Inverse of a square matrix, or None if singular."""
    n = M.rows
    if M.cols != n:
        raise ValueError("inverse needs a square matrix")
    eye = np.eye(n, dtype=np.int64)
    aug = np.concatenate([M.data, eye], axis=1)
    R, rk, pivots = rref(FMatrix(M.field, aug))
    if rk < n or any(c >= n for c in pivots[:n]):
        return None
    return FMatrix(M.field, R.data[:, n:].copy())
