"""Shared oracles and samplers for the test suite.

The oracles here are deliberately independent of the library paths they
check: sumsets by direct set arithmetic on coordinate tuples, field
addition by explicit digit manipulation, counts by brute enumeration.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from sumsetcert import make_field
from sumsetcert.shiftops import PointList


def add_codes(p: int, ell: int, a: int, b: int) -> int:
    """Independent element-code addition: digitwise mod p."""
    out, mult = 0, 1
    for _ in range(ell):
        out += ((a % p + b % p) % p) * mult
        a //= p
        b //= p
        mult *= p
    return out


def add_points(p: int, ell: int, x, y):
    return tuple(add_codes(p, ell, a, b) for a, b in zip(x, y))


def naive_sumset(field, pts_a, pts_b) -> set:
    p, ell = field.p, field.ell
    return {add_points(p, ell, a, b) for a in pts_a for b in pts_b}


def naive_iterate(field, pts, k: int) -> set:
    acc = set(pts)
    for _ in range(k - 1):
        acc = naive_sumset(field, acc, pts)
    return acc


def all_points(field, n: int) -> list[tuple[int, ...]]:
    return [tuple(pt) for pt in itertools.product(range(field.q), repeat=n)]


def decode_point(code: int, q: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        out.append(code % q)
        code //= q
    return tuple(out)


def random_point_set(rng: np.random.Generator, field, n: int,
                     size: int | None = None) -> PointList:
    space = field.q ** n
    if size is None:
        size = int(rng.integers(1, space + 1))
    codes = rng.choice(space, size=size, replace=False)
    pts = tuple(decode_point(int(c), field.q, n) for c in sorted(codes))
    return PointList(field, n, pts)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


SMALL_FIELDS = [make_field(2, 1), make_field(3, 1), make_field(5, 1),
                make_field(7, 1), make_field(2, 2), make_field(3, 2)]

DELTA_CONFIGS = [(2, 2), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)]
