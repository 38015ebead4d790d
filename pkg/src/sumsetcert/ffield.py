"""Exact arithmetic in prime fields F_p and extension fields F_{p^ell}.

Elements are integer codes in [0, q).  An element with polynomial
coefficients (c_0, ..., c_{ell-1}) over F_p (low degree first) has code
sum(c_i * p**i); for ell = 1 the code is just the residue.  Code order
fixes element enumeration, matrix column order and point encoding
everywhere downstream.

Scalar operations work for any desk-scale field.  Vectorized operations
on numpy arrays of codes use direct modular arithmetic for prime fields
and lazily built q x q lookup tables for extension fields.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

#: largest q for which q x q lookup tables may be built
TABLE_LIMIT = 4096


def is_prime(n: int) -> bool:
    """Deterministic trial division; all intended moduli are small."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (coefficient lists, low degree first)

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        factor = (a[-1] * inv_lead) % p
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * mi) % p
        _poly_trim(a)
    return a


def _poly_is_irreducible(m: list[int], p: int) -> bool:
    """Trial division by all monic polynomials of degree <= deg(m)/2."""
    deg = len(m) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    if m[0] == 0:  # divisible by X
        return False
    for d in range(1, deg // 2 + 1):
        for code in range(p ** d):
            g = _digits(code, p, d) + [1]
            if not _poly_mod(m, g, p):
                return False
    return True


def _digits(k: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(k % p)
        k //= p
    return out


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """A finite field F_q with q = p^ell and a fixed irreducible modulus.

    The modulus is stored low-degree-first and includes the leading 1;
    for ell = 1 it is the polynomial X, i.e. (0, 1).
    """

    p: int
    ell: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.ell < 1:
            raise ValueError(f"ell = {self.ell} must be positive")
        m = list(self.modulus)
        if len(m) != self.ell + 1 or m[-1] != 1:
            raise ValueError("modulus must be monic of degree ell")
        if any(not (0 <= c < self.p) for c in m):
            raise ValueError("modulus coefficients must be reduced mod p")
        if self.ell > 1 and not _poly_is_irreducible(m, self.p):
            raise ValueError("modulus is reducible")

    @property
    def q(self) -> int:
        return self.p ** self.ell

    # -- element representation ------------------------------------------

    def coeffs(self, x: int) -> tuple[int, ...]:
        """Polynomial coefficients of the element with code x, low first."""
        self._check(x)
        return tuple(_digits(x, self.p, self.ell))

    def from_coeffs(self, cs) -> int:
        cs = list(cs)
        if len(cs) != self.ell or any(not (0 <= c < self.p) for c in cs):
            raise ValueError("need ell coefficients in [0, p)")
        return sum(c * self.p ** i for i, c in enumerate(cs))

    def _check(self, x: int):
        if not (0 <= x < self.q):
            raise ValueError(f"code {x} outside [0, {self.q})")

    # -- scalar arithmetic -------------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.ell == 1:
            self._check(x), self._check(y)
            return (x + y) % self.p
        return self.from_coeffs(
            (a + b) % self.p for a, b in zip(self.coeffs(x), self.coeffs(y)))

    def neg(self, x: int) -> int:
        if self.ell == 1:
            self._check(x)
            return (-x) % self.p
        return self.from_coeffs((-a) % self.p for a in self.coeffs(x))

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.ell == 1:
            self._check(x), self._check(y)
            return (x * y) % self.p
        prod = _poly_mul(list(self.coeffs(x)), list(self.coeffs(y)), self.p)
        red = _poly_mod(prod, list(self.modulus), self.p)
        red += [0] * (self.ell - len(red))
        return self.from_coeffs(red)

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inversion of zero field element")
        if self.ell == 1:
            self._check(x)
            return pow(x, self.p - 2, self.p)
        return self.pow(x, self.q - 2)

    def pow(self, x: int, k: int) -> int:
        """x**k with k >= 0; 0**0 = 1 by convention."""
        if k < 0:
            raise ValueError("exponent must be nonnegative")
        if self.ell == 1:
            self._check(x)
            return pow(x, k, self.p)
        self._check(x)
        out, base = 1, x
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    # -- vectorized arithmetic on numpy arrays of codes --------------------

    @property
    def _tables(self):
        return _build_tables(self)

    def vadd(self, a, b):
        if self.ell == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        t = self._tables
        return t.add[np.asarray(a), np.asarray(b)]

    def vsub(self, a, b):
        if self.ell == 1:
            return (np.asarray(a) - np.asarray(b)) % self.p
        t = self._tables
        return t.add[np.asarray(a), t.neg[np.asarray(b)]]

    def vneg(self, a):
        if self.ell == 1:
            return (-np.asarray(a)) % self.p
        return self._tables.neg[np.asarray(a)]

    def vmul(self, a, b):
        if self.ell == 1:
            return (np.asarray(a) * np.asarray(b)) % self.p
        return self._tables.mul[np.asarray(a), np.asarray(b)]

    def vsum(self, a, axis):
        """Field sum along an axis (addition is digitwise mod p)."""
        a = np.asarray(a)
        if self.ell == 1:
            return a.sum(axis=axis) % self.p
        total = np.zeros(np.delete(a.shape, axis), dtype=np.int64)
        powers = self.p ** np.arange(self.ell, dtype=np.int64)
        for i in range(self.ell):
            digit = (a // powers[i]) % self.p
            total += powers[i] * (digit.sum(axis=axis) % self.p)
        return total

    def elements(self) -> list[int]:
        return list(range(self.q))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, ell={self.ell}, q={self.q})"


@dataclass(frozen=True)
class _Tables:
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray


@functools.lru_cache(maxsize=None)
def _build_tables(field: FieldSpec) -> _Tables:
    q = field.q
    if q > TABLE_LIMIT:
        raise ValueError(
            f"lookup tables need q <= {TABLE_LIMIT}, got q = {q}")
    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    neg = np.zeros(q, dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)  # inv[0] stays 0, guarded by callers
    for x in range(q):
        neg[x] = field.neg(x)
        if x:
            inv[x] = field.inv(x)
        for y in range(q):
            add[x, y] = field.add(x, y)
            mul[x, y] = field.mul(x, y)
    return _Tables(add, mul, neg, inv)


@functools.lru_cache(maxsize=None)
def make_field(p: int, ell: int = 1) -> FieldSpec:
    """Construct F_{p^ell} with the canonical modulus.

    The modulus is the monic irreducible polynomial of degree ell over
    F_p with least integer code (coefficients read low-to-high, leading
    1 included), so construction is deterministic across runs.
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if ell < 1:
        raise ValueError(f"ell = {ell} must be positive")
    if ell == 1:
        return FieldSpec(p, 1, (0, 1))
    for code in range(p ** ell):
        m = _digits(code, p, ell) + [1]
        if _poly_is_irreducible(m, p):
            return FieldSpec(p, ell, tuple(m))
    raise RuntimeError("unreachable: an irreducible polynomial always exists")


def field_arith(field: FieldSpec, op: str, x: int, y: int | None = None,
                k: int | None = None) -> int:
    """Dispatch a named field operation on element codes."""
    if op == "add":
        return field.add(x, y)
    if op == "neg":
        return field.neg(x)
    if op == "mul":
        return field.mul(x, y)
    if op == "inv":
        return field.inv(x)
    if op == "pow":
        return field.pow(x, k)
    raise ValueError(f"unknown field operation {op!r}")


def enumerate_field(field: FieldSpec) -> list[int]:
    """All q element codes in ascending order; index 0 is zero."""
    return field.elements()


def reindex_phi(p: int, n: int, ell: int, x, direction: str = "pack"):
    """Additive re-identification of F_p^n with F_{p^ell}^{n/ell}.

    Packing groups consecutive blocks of ell coordinates into one
    extension-field element (low block index = low polynomial degree);
    unpacking inverts it.  Both directions are additive bijections
    because extension-field addition is coefficientwise mod p.
    """
    if n % ell != 0:
        raise ValueError(f"ell = {ell} does not divide n = {n}")
    x = tuple(int(v) for v in x)
    q = p ** ell
    if direction == "pack":
        if len(x) != n or any(not (0 <= v < p) for v in x):
            raise ValueError("expected n residues mod p")
        return tuple(
            sum(x[i * ell + j] * p ** j for j in range(ell))
            for i in range(n // ell))
    if direction == "unpack":
        if len(x) != n // ell or any(not (0 <= v < q) for v in x):
            raise ValueError("expected n/ell extension-field codes")
        out = []
        for code in x:
            out.extend(_digits(code, p, ell))
        return tuple(out)
    raise ValueError(f"direction must be 'pack' or 'unpack', got {direction!r}")
