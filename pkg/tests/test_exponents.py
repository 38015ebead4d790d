"""Monomial enumeration, valuations, carry-free multinomials,
decomposition search."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumsetcert.exponents import (Decomposition, enumerate_monomials,
                                  find_decomposition, monomial_count,
                                  monomial_count_exact_weight,
                                  multinomial_nonzero_mod_p, tuple_binom,
                                  vp_factorial, weight)


def brute_monomials(n, max_total, cap):
    """Independent oracle: generate-and-sort."""
    all_tuples = [t for t in itertools.product(range(cap + 1), repeat=n)
                  if sum(t) <= max_total]
    return sorted(all_tuples, key=lambda t: (sum(t), t))


def test_enumeration_examples():
    assert enumerate_monomials(2, 2, 2) == \
        [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert enumerate_monomials(1, 3, 4) == [(0,), (1,), (2,), (3,)]
    assert len(enumerate_monomials(2, 2, 1)) == 4


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("max_total", [0, 1, 4, 6])
@pytest.mark.parametrize("cap", [0, 1, 2, 6])
def test_enumeration_matches_brute_oracle(n, max_total, cap):
    assert enumerate_monomials(n, max_total, cap) == \
        brute_monomials(n, max_total, cap)


def test_enumeration_length_uncapped():
    for n in range(1, 5):
        for D in range(9):
            assert len(enumerate_monomials(n, D, cap=D)) == math.comb(n + D, D)


def test_count_examples():
    assert monomial_count(3, 2, 2) == 6
    assert monomial_count(2, 2, 2) == 4
    for p in (2, 3, 5):
        assert monomial_count(p, 3, 0) == 1
    assert monomial_count(3, 1, 2) == 3


def test_count_matches_enumeration_and_bounds():
    for q in (2, 3, 4, 5):
        for n in (1, 2, 3):
            for D in range(0, (q - 1) * n + 3):
                count = monomial_count(q, n, D)
                assert count == len(enumerate_monomials(n, D, cap=q - 1))
                assert count <= math.comb(n + D, D)
                if D <= (q - 1) * n:
                    assert count >= (1 + D // n) ** n
            assert monomial_count(q, n, (q - 1) * n) == q ** n


def test_count_exact_weight_partitions_total():
    for q, n in [(3, 2), (4, 2), (5, 1)]:
        total = sum(monomial_count_exact_weight(q, n, w)
                    for w in range(n * (q - 1) + 1))
        assert total == q ** n


def test_vp_factorial_examples():
    assert vp_factorial(3, 9) == 4
    assert vp_factorial(2, 4) == 3
    assert vp_factorial(7, 0) == 0


def test_vp_factorial_matches_bigint_oracle():
    for p in (2, 3, 5, 7, 11, 13):
        for k in range(0, 200):
            f = math.factorial(k)
            v = 0
            while f % p == 0:
                f //= p
                v += 1
            assert vp_factorial(p, k) == v


def test_vp_factorial_both_forms_agree_over_range():
    # the assertion inside vp_factorial compares floor-sum and digit-sum
    for p in (2, 3, 5, 7, 11, 13):
        for k in range(10 ** 4 + 1):
            vp_factorial(p, k)


def bigint_multinomial_nonzero(p, z, alphas):
    num = math.prod(math.factorial(c) for c in z)
    den = math.prod(math.factorial(c) for a in alphas for c in a)
    assert num % den == 0
    return (num // den) % p != 0


def test_multinomial_examples():
    assert multinomial_nonzero_mod_p(2, (3,), [(1,), (2,)]) is True
    assert multinomial_nonzero_mod_p(3, (8, 8), [(4, 4), (4, 4)]) is True
    assert multinomial_nonzero_mod_p(2, (3,), [(1,), (1,), (1,)]) is False


def test_multinomial_rejects_bad_sums():
    with pytest.raises(ValueError):
        multinomial_nonzero_mod_p(3, (2, 2), [(1, 1), (0, 0)])
    with pytest.raises(ValueError):
        multinomial_nonzero_mod_p(3, (2,), [(1, 1), (1, 1)])


@given(st.data())
@settings(max_examples=300, deadline=None)
def test_multinomial_matches_bigint_oracle(data):
    p = data.draw(st.sampled_from([2, 3, 5, 7, 11, 13]))
    n = data.draw(st.integers(1, 3))
    m = data.draw(st.integers(1, 3))
    alphas = [tuple(data.draw(st.integers(0, 20)) for _ in range(n))
              for _ in range(m)]
    z = tuple(sum(a[j] for a in alphas) for j in range(n))
    assert multinomial_nonzero_mod_p(p, z, alphas) == \
        bigint_multinomial_nonzero(p, z, alphas)


# ---------------------------------------------------------------------------
# decomposition search

def brute_decompositions(p, ell, n, budgets):
    """Independent oracle: enumerate every carry-free split per
    coordinate-digit and filter by weight budgets."""
    q = p ** ell
    m = len(budgets)
    per_cell = [t for t in itertools.product(range(p), repeat=m)
                if sum(t) == p - 1]
    cells = [(j, t) for j in range(n) for t in range(ell)]
    found = []
    for combo in itertools.product(per_cell, repeat=len(cells)):
        alphas = [[0] * n for _ in range(m)]
        for (j, t), split in zip(cells, combo):
            for s, d in enumerate(split):
                alphas[s][j] += d * p ** t
        if all(sum(a) <= b for a, b in zip(alphas, budgets)):
            found.append(tuple(tuple(a) for a in alphas))
    return found


def test_decomposition_deterministic_first_solution():
    d = find_decomposition(3, 1, 2, [2, 2])
    assert d == Decomposition(((0, 2), (2, 0)), (2, 2))
    assert multinomial_nonzero_mod_p(3, d.target, d.alphas)
    # stable across calls
    assert find_decomposition(3, 1, 2, [2, 2]) == d


def test_decomposition_canonical_uniform_split():
    # m = p-1 equal budgets always admit the uniform split
    for p, ell in [(2, 2), (3, 2), (2, 3), (5, 1), (3, 1)]:
        for n in (1, 2):
            q = p ** ell
            m = p - 1
            budget = n * (q - 1) // (p - 1)
            d = find_decomposition(p, ell, n, [budget] * m)
            assert d is not None
            assert all(weight(a) <= budget for a in d.alphas)
            assert multinomial_nonzero_mod_p(p, d.target, d.alphas)


def test_decomposition_budget_shortfall_returns_none():
    assert find_decomposition(3, 1, 2, [1, 1]) is None
    assert find_decomposition(2, 2, 1, [1, 1]) is None


def test_decomposition_absence_matches_brute_oracle():
    rng = np.random.default_rng(11)
    for _ in range(60):
        p = int(rng.choice([2, 3]))
        ell = int(rng.integers(1, 3))
        n = int(rng.integers(1, 3))
        m = int(rng.integers(1, 4))
        budgets = [int(rng.integers(1, (p ** ell - 1) * n + 2))
                   for _ in range(m)]
        mine = find_decomposition(p, ell, n, budgets)
        ref = brute_decompositions(p, ell, n, budgets)
        if mine is None:
            assert ref == []
        else:
            assert mine.alphas in ref


def test_decomposition_rejects_bad_budgets():
    with pytest.raises(ValueError):
        find_decomposition(3, 1, 2, [])
    with pytest.raises(ValueError):
        find_decomposition(3, 1, 2, [0, 2])


def test_tuple_binom():
    assert tuple_binom((3, 2), (1, 1)) == 6
    assert tuple_binom((2,), (3,)) == 0
