"""Shift-operator calculus on point sets in F_q^n.

A shift by a point h acts on polynomials by substituting X + h for X,
and expands as sum_alpha h^alpha H^(alpha) where H^(alpha) is the
coefficient-extraction (Hasse) derivative of order alpha.  A linear
combination of shifts over a point set A therefore has a derivative
expansion whose coefficient at alpha is sum_a c_a a^alpha.

Because a^k depends only on k's reduction (0 -> 0, k >= 1 ->
((k-1) mod (q-1)) + 1), the infinite expansion is fully determined by
its restriction to the window [0, q-1]^n, and reduction never increases
weight, so expansion degrees computed on the window equal the true
ones.  All operators here are coefficient vectors over this window in
graded-lex order.

Key objects:
  * the evaluation matrix with entries a^alpha (0^0 = 1),
  * the nondegeneracy degree: the largest d such that no nonzero
    polynomial of degree <= d vanishes on all of A,
  * the graded leading-term spaces: for each d, the space of weight-d
    leading components of expansion-degree->=-d combinations,
  * products of homogeneous combinations under
    H^(alpha) H^(beta) = C(alpha+beta, alpha) H^(alpha+beta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from . import linalg
from .exponents import enumerate_monomials, tuple_binom, weight
from .ffield import FieldSpec
from .linalg import FMatrix

#: default guard on q^n for whole-window computations
DEFAULT_MAX_CELLS = 2 ** 20


class SizeGuardError(ValueError):
    """Raised when a whole-window computation would exceed the cell guard."""

    def __init__(self, guard_name: str, needed: int, limit: int):
        self.guard_name = guard_name
        self.needed = needed
        self.limit = limit
        super().__init__(
            f"guard {guard_name}: needs {needed} cells, limit {limit}")


@dataclass(frozen=True)
class PointList:
    """Distinct points of F_q^n, each a tuple of n element codes."""

    field: FieldSpec
    n: int
    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")
        object.__setattr__(
            self, "points", tuple(tuple(int(c) for c in pt) for pt in self.points))
        q = self.field.q
        for pt in self.points:
            if len(pt) != self.n:
                raise ValueError(f"point {pt} has wrong dimension")
            if any(not (0 <= c < q) for c in pt):
                raise ValueError(f"point {pt} has codes outside [0, {q})")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be pairwise distinct")

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class OperatorVec:
    """A linear combination sum_a c_a T^a over the points of `base`."""

    base: PointList
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != len(self.base):
            raise ValueError("need one coefficient per point")
        q = self.base.field.q
        if any(not (0 <= c < q) for c in self.coeffs):
            raise ValueError("coefficients must be element codes")


# ---------------------------------------------------------------------------
# reduced-exponent window

def reduce_exponent(k: int, q: int) -> int:
    """Window reduction: 0 for k = 0, else ((k-1) mod (q-1)) + 1."""
    return 0 if k == 0 else ((k - 1) % (q - 1)) + 1


def reduce_tuple(alpha, q: int) -> tuple[int, ...]:
    return tuple(reduce_exponent(a, q) for a in alpha)


@lru_cache(maxsize=None)
def reduced_window(q: int, n: int) -> tuple[tuple[int, ...], ...]:
    """All q^n reduced exponents in graded-lex order."""
    return tuple(enumerate_monomials(n, n * (q - 1), cap=q - 1))


@lru_cache(maxsize=None)
def window_index(q: int, n: int) -> dict[tuple[int, ...], int]:
    return {alpha: i for i, alpha in enumerate(reduced_window(q, n))}


@lru_cache(maxsize=None)
def weight_slices(q: int, n: int) -> tuple[slice, ...]:
    """Per-weight contiguous column ranges of the window, index = weight."""
    window = reduced_window(q, n)
    slices = []
    start = 0
    for d in range(n * (q - 1) + 1):
        stop = start
        while stop < len(window) and weight(window[stop]) == d:
            stop += 1
        slices.append(slice(start, stop))
        start = stop
    return tuple(slices)


def _check_cells(field: FieldSpec, n: int, max_cells: int, guard: str):
    if field.q ** n > max_cells:
        raise SizeGuardError(guard, field.q ** n, max_cells)


# ---------------------------------------------------------------------------
# evaluation matrices

def _point_powers(A: PointList, cap: int) -> list[np.ndarray]:
    """pows[i][k] = vector over points of (coordinate i)**k, 0**0 = 1."""
    F = A.field
    coords = np.array(A.points, dtype=np.int64)  # (|A|, n)
    pows = []
    for i in range(A.n):
        col = coords[:, i]
        levels = [np.ones(len(A), dtype=np.int64)]
        for _ in range(cap):
            levels.append(F.vmul(levels[-1], col))
        pows.append(np.stack(levels))
    return pows


def _monomial_matrix(A: PointList, monomials) -> FMatrix:
    if len(A) == 0:
        raise ValueError("point set must be nonempty")
    F = A.field
    cap = max((max(m) for m in monomials if m), default=0)
    pows = _point_powers(A, cap)
    cols = []
    for alpha in monomials:
        col = None
        for i, a in enumerate(alpha):
            if a == 0:
                continue
            col = pows[i][a] if col is None else F.vmul(col, pows[i][a])
        if col is None:
            col = np.ones(len(A), dtype=np.int64)
        cols.append(col)
    return FMatrix(F, np.stack(cols, axis=1))


def eval_matrix(A: PointList, d: int) -> FMatrix:
    """Evaluation matrix: rows = points, columns = monomials of total
    degree <= d in graded-lex order, entries a^alpha with 0^0 = 1."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return _monomial_matrix(A, enumerate_monomials(A.n, d, cap=d))


def expansion_matrix(A: PointList, max_weight: int | None = None,
                     max_cells: int = DEFAULT_MAX_CELLS) -> FMatrix:
    """Reduced-window expansion matrix: row a holds the derivative
    expansion coefficients of T^a on window exponents of weight <=
    max_weight (whole window by default)."""
    q = A.field.q
    full = A.n * (q - 1)
    if max_weight is None or max_weight >= full:
        max_weight = full
        _check_cells(A.field, A.n, max_cells, "max-cells")
        monomials = reduced_window(q, A.n)
    else:
        monomials = enumerate_monomials(A.n, max_weight, cap=q - 1)
    return _monomial_matrix(A, monomials)


# ---------------------------------------------------------------------------
# nondegeneracy

def nondeg_degree(A: PointList) -> tuple[int, list[tuple[tuple[int, ...], int]] | None]:
    """Largest d* such that the degree-<=-d evaluation matrix has full
    column rank, plus a witness: a nonzero polynomial of degree <=
    d*+1 vanishing on A, as (exponent, coefficient-code) pairs.

    d* <= q-1 always, since degree-q columns repeat degree-1 columns as
    functions on the field.
    """
    if len(A) == 0:
        raise ValueError("point set must be nonempty")
    q = A.field.q
    d = 0
    while True:
        M = eval_matrix(A, d + 1)
        kern = linalg.column_kernel(M)
        if kern:
            monomials = enumerate_monomials(A.n, d + 1, cap=d + 1)
            v = kern[0]
            witness = [(monomials[i], int(c)) for i, c in enumerate(v) if c]
            return d, witness
        d += 1
        assert d <= q, "full column rank persisted past the field exponent"


# ---------------------------------------------------------------------------
# expansions and graded leading-term spaces

@dataclass
class HasseExpansion:
    """Derivative expansion coefficients over the reduced window."""

    field: FieldSpec
    n: int
    coeffs: np.ndarray  # length q^n, graded-lex window order

    @property
    def window(self) -> tuple[tuple[int, ...], ...]:
        return reduced_window(self.field.q, self.n)

    def coefficient(self, alpha) -> int:
        """Coefficient at any alpha in N^n (reduced into the window)."""
        idx = window_index(self.field.q, self.n)
        return int(self.coeffs[idx[reduce_tuple(alpha, self.field.q)]])

    @property
    def degree(self):
        """Minimal weight with a nonzero coefficient; inf if all zero."""
        nz = np.nonzero(self.coeffs)[0]
        if nz.size == 0:
            return math.inf
        return weight(self.window[int(nz[0])])

    def component(self, d: int) -> "HomogeneousOp":
        sl = weight_slices(self.field.q, self.n)[d]
        window = self.window
        coeffs = {window[i]: int(self.coeffs[i])
                  for i in range(sl.start, sl.stop) if self.coeffs[i]}
        return HomogeneousOp(self.field, self.n, d, coeffs)

    def leading(self) -> "HomogeneousOp | None":
        d = self.degree
        return None if d is math.inf else self.component(d)


def hasse_expansion(v: OperatorVec,
                    max_cells: int = DEFAULT_MAX_CELLS) -> HasseExpansion:
    """Reduced derivative expansion of sum_a c_a T^a: the coefficient at
    window exponent alpha is sum_a c_a a^alpha."""
    A = v.base
    _check_cells(A.field, A.n, max_cells, "max-cells")
    E = expansion_matrix(A, max_cells=max_cells)
    coeffs = linalg.vecmat(np.array(v.coeffs, dtype=np.int64), E)
    return HasseExpansion(A.field, A.n, coeffs)


@dataclass
class HomogeneousOp:
    """A homogeneous combination of derivatives of one fixed weight."""

    field: FieldSpec
    n: int
    weight: int
    coeffs: dict[tuple[int, ...], int] = dc_field(default_factory=dict)

    def __post_init__(self):
        for alpha, c in self.coeffs.items():
            if weight(alpha) != self.weight:
                raise ValueError(f"exponent {alpha} has wrong weight")
            if not (0 <= c < self.field.q):
                raise ValueError("coefficients must be element codes")

    def is_zero(self) -> bool:
        return not any(self.coeffs.values())

    def vector(self) -> np.ndarray:
        """Coefficients over the weight-d window slice, graded-lex order."""
        sl = weight_slices(self.field.q, self.n)[self.weight]
        window = reduced_window(self.field.q, self.n)
        out = np.zeros(sl.stop - sl.start, dtype=np.int64)
        for alpha, c in self.coeffs.items():
            out[window_index(self.field.q, self.n)[alpha] - sl.start] = c
        return out


def op_product(u: HomogeneousOp, v: HomogeneousOp) -> HomogeneousOp:
    """Product of homogeneous combinations, bilinear over
    H^(alpha) H^(beta) = C(alpha+beta, alpha) H^(alpha+beta) with the
    binomial reduced mod p.

    Terms whose exponent sum leaves the window always carry a binomial
    divisible by p (adding parts <= q-1 past q-1 forces a base-p carry),
    which is asserted and the term dropped, so the window is closed
    under products.
    """
    if u.field != v.field or u.n != v.n:
        raise ValueError("operands live over different spaces")
    F, q = u.field, u.field.q
    out: dict[tuple[int, ...], int] = {}
    for alpha, ca in u.coeffs.items():
        for beta, cb in v.coeffs.items():
            gamma = tuple(a + b for a, b in zip(alpha, beta))
            binom = tuple_binom(gamma, alpha) % F.p
            if any(g > q - 1 for g in gamma):
                assert binom == 0, "out-of-window product with unit binomial"
                continue
            if binom == 0:
                continue
            term = F.mul(F.mul(ca, cb), binom)
            prev = out.get(gamma, 0)
            out[gamma] = F.add(prev, term)
    out = {g: c for g, c in out.items() if c}
    return HomogeneousOp(F, u.n, u.weight + v.weight, out)


@dataclass
class GradedDelta:
    """Bases of the leading-term spaces of a point set, graded by weight.

    per_degree[d] is a (dim_d, width_d) array of coefficient vectors over
    the weight-d window slice; degrees with zero dimension are omitted.
    """

    field: FieldSpec
    n: int
    per_degree: dict[int, np.ndarray]

    def dims(self) -> dict[int, int]:
        return {d: b.shape[0] for d, b in sorted(self.per_degree.items())}

    def total_dim(self) -> int:
        return sum(b.shape[0] for b in self.per_degree.values())

    def max_degree(self) -> int:
        return max(self.per_degree)

    def operators(self, d: int) -> list[HomogeneousOp]:
        sl = weight_slices(self.field.q, self.n)[d]
        window = reduced_window(self.field.q, self.n)
        ops = []
        for row in self.per_degree.get(d, np.zeros((0, 0))):
            coeffs = {window[sl.start + i]: int(c)
                      for i, c in enumerate(row) if c}
            ops.append(HomogeneousOp(self.field, self.n, d, coeffs))
        return ops


def delta_spaces(A: PointList,
                 max_cells: int = DEFAULT_MAX_CELLS) -> GradedDelta:
    """Graded bases of the leading-term spaces of A.

    Gaussian elimination over the whole-window expansion matrix with
    pivots taken in graded-lex column order: a pivot row with pivot in a
    weight-d column has zero coefficients below weight d, so its
    weight-d restriction is a complete leading component; together these
    restrictions form bases, one space per degree, with total dimension
    |A|.
    """
    _check_cells(A.field, A.n, max_cells, "max-cells")
    E = expansion_matrix(A, max_cells=max_cells)
    R, rk, pivots = linalg.rref(E)
    assert rk == len(A), "shift combinations of distinct points are independent"
    window = reduced_window(A.field.q, A.n)
    slices = weight_slices(A.field.q, A.n)
    grouped: dict[int, list[np.ndarray]] = {}
    for j, c in enumerate(pivots):
        d = weight(window[c])
        grouped.setdefault(d, []).append(R.data[j, slices[d]])
    per_degree = {d: np.stack(rows) for d, rows in grouped.items()}
    return GradedDelta(A.field, A.n, per_degree)


def deg_of_set(A: PointList, max_cells: int = DEFAULT_MAX_CELLS) -> int:
    """Largest weight with a nonzero leading-term space; at most
    n(q-1), with equality exactly when A is the whole space."""
    return delta_spaces(A, max_cells=max_cells).max_degree()


# ---------------------------------------------------------------------------
# membership of derivatives in the leading-term spaces

def in_delta(A: PointList, op: HomogeneousOp,
             max_cells: int = DEFAULT_MAX_CELLS) -> tuple[bool, OperatorVec | None]:
    """Whether a homogeneous combination is a leading component of some
    expansion-degree->=-d shift combination over A; with a certificate.

    Decided by expressing, in the row space of the weight-<=-d expansion
    matrix, the target vector that vanishes below weight d and matches
    the combination on the weight-d slice.  Certificates are re-verified
    by an independent expansion.
    """
    if op.field != A.field or op.n != A.n:
        raise ValueError("operand lives over a different space")
    d = op.weight
    monomials = enumerate_monomials(A.n, d, cap=A.field.q - 1)
    M = _monomial_matrix(A, monomials)
    slices = weight_slices(A.field.q, A.n)
    target = np.zeros(len(monomials), dtype=np.int64)
    offset = slices[d].start
    target[offset:] = op.vector()
    x = linalg.express_in_rowspace(M, target)
    if x is None:
        return False, None
    cert = OperatorVec(A, tuple(int(c) for c in x))
    expansion = hasse_expansion(cert, max_cells=max_cells)
    assert np.array_equal(expansion.coeffs[: len(monomials)], target), \
        "certificate failed independent re-expansion"
    return True, cert


def hasse_in_delta(A: PointList, alpha,
                   max_cells: int = DEFAULT_MAX_CELLS) -> tuple[bool, OperatorVec | None]:
    """Whether the single derivative H^(alpha) is a leading component
    over A.  Guaranteed true whenever nondeg_degree(A) >= |alpha|."""
    alpha = tuple(alpha)
    q = A.field.q
    if len(alpha) != A.n or any(a < 0 for a in alpha):
        raise ValueError("alpha must be a nonnegative tuple of length n")
    if any(a > q - 1 for a in alpha):
        # leading components are supported on reduced exponents only
        return False, None
    op = HomogeneousOp(A.field, A.n, weight(alpha), {alpha: 1})
    return in_delta(A, op, max_cells=max_cells)
