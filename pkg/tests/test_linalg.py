"""Exact elimination: echelon forms, kernels, row-space membership."""

import numpy as np
import pytest

from conftest import SMALL_FIELDS
from sumsetcert.ffield import make_field
from sumsetcert.linalg import (FMatrix, column_kernel, express_in_rowspace,
                               inverse, matvec, rank, rref, vecmat)
from sumsetcert.shiftops import PointList, eval_matrix


def random_matrix(rng, field, rows, cols):
    return FMatrix(field, rng.integers(0, field.q, size=(rows, cols)))


def test_rref_identity_and_zero():
    F = make_field(5, 1)
    eye = FMatrix(F, np.eye(4, dtype=np.int64))
    R, rk, pivots = rref(eye)
    assert rk == 4 and pivots == (0, 1, 2, 3)
    zero = FMatrix(F, np.zeros((3, 5), dtype=np.int64))
    assert rref(zero)[1] == 0


def test_rref_vandermonde_full_rank():
    F = make_field(3, 1)
    V = FMatrix.from_rows(F, [[1, x, (x * x) % 3] for x in range(3)])
    assert rank(V) == 3


def test_rref_is_idempotent_and_pivots_increase():
    rng = np.random.default_rng(5)
    for field in SMALL_FIELDS:
        M = random_matrix(rng, field, 6, 8)
        R, rk, pivots = rref(M)
        assert list(pivots) == sorted(pivots)
        R2, rk2, pivots2 = rref(R)
        assert rk2 == rk and pivots2 == pivots
        assert np.array_equal(R2.data, R.data)


def test_kernel_examples():
    F2 = make_field(2, 1)
    assert column_kernel(FMatrix(F2, np.eye(3, dtype=np.int64))) == []
    basis = column_kernel(FMatrix.from_rows(F2, [[1, 1]]))
    assert len(basis) == 1 and basis[0].tolist() == [1, 1]


def test_kernel_of_square_evaluation():
    F5 = make_field(5, 1)
    square = PointList(F5, 2, ((0, 0), (1, 0), (0, 1), (1, 1)))
    M = eval_matrix(square, 2)
    assert (M.rows, M.cols) == (4, 6)
    basis = column_kernel(M)
    assert len(basis) == 2
    for v in basis:
        assert not matvec(M, v).any()


def test_rowspace_examples():
    F3 = make_field(3, 1)
    M = FMatrix.from_rows(F3, [[1, 2, 0], [0, 1, 1]])
    x = express_in_rowspace(M, M.data[0])
    assert x.tolist() == [1, 0]
    assert express_in_rowspace(M, np.zeros(3, dtype=np.int64)).tolist() == [0, 0]
    # indicator of the quadratic column against an invertible Vandermonde
    V = FMatrix.from_rows(F3, [[1, x, (x * x) % 3] for x in range(3)])
    w = np.array([0, 0, 1], dtype=np.int64)
    x = express_in_rowspace(V, w)
    assert x is not None
    assert np.array_equal(vecmat(x, V), w)
    inv = inverse(V)
    assert np.array_equal(x, inv.data.T[:, 2] % 3) or \
        np.array_equal(vecmat(inv.data[:, 2], V), w)


def test_rowspace_absence():
    F2 = make_field(2, 1)
    M = FMatrix.from_rows(F2, [[1, 0]])
    assert express_in_rowspace(M, np.array([0, 1])) is None


def test_rank_transpose_on_random_matrices(rng):
    for trial in range(200):
        field = SMALL_FIELDS[trial % len(SMALL_FIELDS)]
        rows = int(rng.integers(1, 13))
        cols = int(rng.integers(1, 13))
        M = random_matrix(rng, field, rows, cols)
        assert rank(M) == rank(M.transpose())


def test_rowspace_membership_iff_rank_preserved(rng):
    for trial in range(120):
        field = SMALL_FIELDS[trial % len(SMALL_FIELDS)]
        M = random_matrix(rng, field, int(rng.integers(1, 7)),
                          int(rng.integers(1, 7)))
        w = rng.integers(0, field.q, size=M.cols)
        stacked = FMatrix(field, np.vstack([M.data, w[None, :]]))
        x = express_in_rowspace(M, w)
        assert (x is not None) == (rank(stacked) == rank(M))
        if x is not None:
            assert np.array_equal(vecmat(x, M), w % field.q)


def test_kernel_vectors_annihilate(rng):
    for trial in range(80):
        field = SMALL_FIELDS[trial % len(SMALL_FIELDS)]
        M = random_matrix(rng, field, int(rng.integers(1, 8)),
                          int(rng.integers(1, 8)))
        basis = column_kernel(M)
        assert len(basis) == M.cols - rank(M)
        for v in basis:
            assert not matvec(M, v).any()


def test_inverse_round_trip(rng):
    for field in SMALL_FIELDS:
        n = 3
        while True:
            M = random_matrix(rng, field, n, n)
            if rank(M) == n:
                break
        inv = inverse(M)
        prod = np.array([matvec(M, inv.data[:, j]) for j in range(n)]).T
        assert np.array_equal(prod, np.eye(n, dtype=np.int64))
    F = make_field(3, 1)
    assert inverse(FMatrix.from_rows(F, [[1, 2], [0, 1]])) is not None
    assert inverse(FMatrix.from_rows(F, [[1, 2], [2, 1]])) is None  # det = -3


def test_matrix_validation():
    F = make_field(3, 1)
    with pytest.raises(ValueError):
        FMatrix(F, np.array([[5]]))
    with pytest.raises(ValueError):
        matvec(FMatrix.from_rows(F, [[1, 2]]), [1])
