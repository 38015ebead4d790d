"""Dense subsets of F_q^n and exact (iterated) sumsets.

A set is a boolean grid with one p-ary axis per coefficient digit of
each coordinate (n*ell axes of length p), so that addition of a fixed
point is a cyclic roll of the grid along every axis.  The flat C-order
index of a cell equals the mixed-radix code
sum_i code(x_i) * q^(i-1), coordinate 1 least significant.

Sums involving the empty set are empty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ffield import FieldSpec
from .shiftops import DEFAULT_MAX_CELLS, SizeGuardError


@dataclass
class DensePointSet:
    field: FieldSpec
    n: int
    bits: np.ndarray  # bool, shape (p,) * (n * ell)

    def __post_init__(self):
        m = self.n * self.field.ell
        expected = (self.field.p,) * m
        if self.bits.shape != expected:
            raise ValueError(f"grid shape must be {expected}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def empty(cls, field: FieldSpec, n: int,
              max_cells: int = DEFAULT_MAX_CELLS) -> "DensePointSet":
        if field.q ** n > max_cells:
            raise SizeGuardError("max-cells", field.q ** n, max_cells)
        m = n * field.ell
        return cls(field, n, np.zeros((field.p,) * m, dtype=bool))

    @classmethod
    def from_points(cls, field: FieldSpec, n: int, points,
                    max_cells: int = DEFAULT_MAX_CELLS) -> "DensePointSet":
        out = cls.empty(field, n, max_cells=max_cells)
        for pt in points:
            out.add(pt)
        return out

    @classmethod
    def full(cls, field: FieldSpec, n: int,
             max_cells: int = DEFAULT_MAX_CELLS) -> "DensePointSet":
        out = cls.empty(field, n, max_cells=max_cells)
        out.bits[...] = True
        return out

    # -- indexing -----------------------------------------------------------

    def _axes_index(self, point) -> tuple[int, ...]:
        """Grid index of a point; axis k holds digit (m-1-k) so that the
        flat C-order index is the mixed-radix point code."""
        point = tuple(int(c) for c in point)
        if len(point) != self.n:
            raise ValueError("point has wrong dimension")
        digits = []
        for code in point:
            if not (0 <= code < self.field.q):
                raise ValueError(f"coordinate code {code} out of range")
            for _ in range(self.field.ell):
                digits.append(code % self.field.p)
                code //= self.field.p
        return tuple(reversed(digits))

    def add(self, point):
        self.bits[self._axes_index(point)] = True

    def contains(self, point) -> bool:
        return bool(self.bits[self._axes_index(point)])

    def to_points(self) -> list[tuple[int, ...]]:
        """Points in ascending mixed-radix code order."""
        p, ell, n = self.field.p, self.field.ell, self.n
        out = []
        for idx in np.argwhere(self.bits):
            digits = idx[::-1]  # digit g of the point code, low first
            point = tuple(
                int(sum(digits[i * ell + j] * p ** j for j in range(ell)))
                for i in range(n))
            out.append(point)
        return sorted(out, key=lambda pt: tuple(reversed(pt)))

    # -- queries ------------------------------------------------------------

    def cardinality(self) -> int:
        return int(self.bits.sum())

    def is_empty(self) -> bool:
        return not self.bits.any()

    def equals(self, other: "DensePointSet") -> bool:
        return (self.field == other.field and self.n == other.n
                and np.array_equal(self.bits, other.bits))

    def copy(self) -> "DensePointSet":
        return DensePointSet(self.field, self.n, self.bits.copy())


def is_full(S: DensePointSet) -> bool:
    return bool(S.bits.all())


def sumset(S: DensePointSet, T: DensePointSet) -> DensePointSet:
    """Exact sumset {s + t}.  The smaller operand drives a loop of
    whole-grid cyclic translations of the other."""
    if S.field != T.field or S.n != T.n:
        raise ValueError("operands live over different spaces")
    out = DensePointSet(S.field, S.n, np.zeros_like(S.bits))
    if S.is_empty() or T.is_empty():
        return out
    if is_full(S) or is_full(T):
        out.bits[...] = True
        return out
    small, large = (S, T) if S.cardinality() <= T.cardinality() else (T, S)
    axes = tuple(range(small.bits.ndim))
    for pt in small.to_points():
        shift = small._axes_index(pt)
        out.bits |= np.roll(large.bits, shift=shift, axis=axes)
    return out


def iterate_sumset(S: DensePointSet, k: int) -> DensePointSet:
    """k-fold sumset S + ... + S by binary doubling.

    Once the accumulator covers the whole space it stays covered (every
    remaining summand is nonempty), so doubling may stop early; the
    result matches the naive left-fold.
    """
    if k < 1:
        raise ValueError("fold count must be positive")
    if S.is_empty():
        return S.copy()
    acc: DensePointSet | None = None
    base = S
    while k:
        if k & 1:
            acc = base.copy() if acc is None else sumset(acc, base)
            if is_full(acc):
                return acc
        k >>= 1
        if k:
            base = sumset(base, base)
    return acc


def sum_of_family(sets: list[DensePointSet]) -> DensePointSet:
    """Left-fold sumset of a nonempty family."""
    if not sets:
        raise ValueError("family must be nonempty")
    acc = sets[0].copy()
    for S in sets[1:]:
        acc = sumset(acc, S)
    return acc
