"""Exponent-tuple combinatorics for the operator calculus.

Exponent tuples are plain tuples of nonnegative ints.  Monomials are
always listed in graded order (total degree ascending) with ties broken
lexicographically ascending on (a_1, ..., a_n); every matrix column
order downstream derives from this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache


def weight(alpha) -> int:
    return sum(alpha)


def dominates(alpha, beta) -> bool:
    """Componentwise alpha >= beta."""
    return all(a >= b for a, b in zip(alpha, beta))


def tuple_factorial(alpha) -> int:
    return math.prod(math.factorial(a) for a in alpha)


def tuple_binom(alpha, beta) -> int:
    """Product of componentwise binomial coefficients C(alpha_i, beta_i)."""
    return math.prod(math.comb(a, b) for a, b in zip(alpha, beta))


def _level(n: int, w: int, cap: int) -> list[tuple[int, ...]]:
    if n == 1:
        return [(w,)] if w <= cap else []
    out = []
    for first in range(min(cap, w) + 1):
        for rest in _level(n - 1, w - first, cap):
            out.append((first,) + rest)
    return out


@lru_cache(maxsize=None)
def _levels_cached(n: int, w: int, cap: int) -> tuple[tuple[int, ...], ...]:
    return tuple(_level(n, w, cap))


def enumerate_monomials(n: int, max_total: int, cap: int) -> list[tuple[int, ...]]:
    """All exponent tuples with total degree <= max_total and each part <= cap.

    Graded order, ties lexicographic ascending.
    """
    if n < 1:
        raise ValueError("need at least one variable")
    if max_total < 0 or cap < 0:
        raise ValueError("degree bounds must be nonnegative")
    out: list[tuple[int, ...]] = []
    for w in range(max_total + 1):
        out.extend(_levels_cached(n, w, cap))
    return out


def monomial_count(q: int, n: int, max_total: int) -> int:
    """Number of n-variable monomials of total degree <= max_total with
    individual degree <= q-1 in each variable.

    Computed by inclusion-exclusion over variables forced past q-1;
    agrees with len(enumerate_monomials(n, max_total, q - 1)).
    """
    if q < 2 or n < 1 or max_total < 0:
        raise ValueError("need q >= 2, n >= 1, max_total >= 0")
    total = 0
    for j in range(n + 1):
        rem = max_total - j * q
        if rem < 0:
            break
        total += (-1) ** j * math.comb(n, j) * math.comb(rem + n, n)
    return total


def monomial_count_exact_weight(q: int, n: int, w: int) -> int:
    """Number of tuples with total degree exactly w and parts <= q-1."""
    if w == 0:
        return 1
    return monomial_count(q, n, w) - monomial_count(q, n, w - 1)


def base_digits(k: int, p: int) -> list[int]:
    """Base-p digits of k, least significant first; empty for k = 0."""
    out = []
    while k:
        out.append(k % p)
        k //= p
    return out


def vp_factorial(p: int, k: int) -> int:
    """Exponent of p in k!.

    Evaluates both the floor-sum and the digit-sum form and checks they
    agree before returning.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    total, power = 0, p
    while power <= k:
        total += k // power
        power *= p
    digit_form = (k - sum(base_digits(k, p))) // (p - 1)
    assert total == digit_form, "Legendre valuation forms disagree"
    return total


def multinomial_nonzero_mod_p(p: int, z, alphas) -> bool:
    """Whether z! / prod(alpha_i!) is nonzero mod p.

    Decided per coordinate by the carry-free digit criterion: the base-p
    digits of the parts must add without carries in every position.
    Cross-checked against the valuation identity v_p(z_j!) =
    sum_i v_p(alpha_i_j!).
    """
    z = tuple(z)
    alphas = [tuple(a) for a in alphas]
    n = len(z)
    if any(len(a) != n for a in alphas):
        raise ValueError("mismatched tuple dimensions")
    for j in range(n):
        if sum(a[j] for a in alphas) != z[j]:
            raise ValueError("parts do not sum to the target tuple")
    nonzero = True
    for j in range(n):
        cols = [base_digits(a[j], p) for a in alphas]
        width = max((len(c) for c in cols), default=0)
        carry_free = all(
            sum(c[t] for c in cols if t < len(c)) <= p - 1
            for t in range(width))
        by_valuation = vp_factorial(p, z[j]) == sum(
            vp_factorial(p, a[j]) for a in alphas)
        assert carry_free == by_valuation, "digit and valuation tests disagree"
        nonzero = nonzero and carry_free
    return nonzero


@dataclass(frozen=True)
class Decomposition:
    """Exponent tuples alpha_1..alpha_m summing componentwise to target."""

    alphas: tuple[tuple[int, ...], ...]
    target: tuple[int, ...]

    def __post_init__(self):
        n = len(self.target)
        for j in range(n):
            if sum(a[j] for a in self.alphas) != self.target[j]:
                raise ValueError("parts do not sum to the target")


def _compositions(total: int, m: int) -> list[tuple[int, ...]]:
    if m == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, m - 1):
            out.append((first,) + rest)
    return out


def find_decomposition(p: int, ell: int, n: int, budgets) -> Decomposition | None:
    """Search for tuples alpha_i with |alpha_i| <= budgets[i] summing to
    (q-1, ..., q-1) whose multinomial coefficient is nonzero mod p.

    Nonzero mod p forces every base-p digit of q-1 (each equal to p-1)
    to split carry-free among the m parts, so the search runs over digit
    layers: cells (coordinate j, digit position t) in ascending order,
    per-cell compositions of p-1 in lexicographic ascending order, with
    backtracking.  A branch is pruned when the remaining weight budget
    cannot cover the remaining cells.  The first solution found is
    returned, which makes certificates reproducible.
    """
    budgets = list(budgets)
    m = len(budgets)
    if m < 1 or any(b < 1 for b in budgets):
        raise ValueError("budgets must be a nonempty list of positive ints")
    q = p ** ell
    target = tuple([q - 1] * n)
    cells = [(j, t) for j in range(n) for t in range(ell)]
    cell_weight = [(p - 1) * p ** t for _, t in cells]
    # need[i] = total weight still to distribute from cell i onward
    need = [0] * (len(cells) + 1)
    for i in range(len(cells) - 1, -1, -1):
        need[i] = need[i + 1] + cell_weight[i]
    if sum(budgets) < need[0]:
        return None
    splits = _compositions(p - 1, m)
    remaining = budgets[:]
    chosen: list[tuple[int, ...]] = []

    def backtrack(i: int) -> bool:
        if i == len(cells):
            return True
        if sum(remaining) < need[i]:
            return False
        _, t = cells[i]
        unit = p ** t
        for split in splits:
            if all(remaining[s] >= d * unit for s, d in enumerate(split)):
                for s, d in enumerate(split):
                    remaining[s] -= d * unit
                chosen.append(split)
                if backtrack(i + 1):
                    return True
                chosen.pop()
                for s, d in enumerate(split):
                    remaining[s] += d * unit
        return False

    if not backtrack(0):
        return None
    alphas = [[0] * n for _ in range(m)]
    for (j, t), split in zip(cells, chosen):
        for s, d in enumerate(split):
            alphas[s][j] += d * p ** t
    result = Decomposition(tuple(tuple(a) for a in alphas), target)
    assert multinomial_nonzero_mod_p(p, target, result.alphas)
    assert all(weight(a) <= b for a, b in zip(result.alphas, budgets))
    return result
