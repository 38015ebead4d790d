"""Random-set expansion experiments and the affine hash family.

The hash family maps x to the label of the rectangle of an equitable
d-cube partition of F_p^n containing Ax + b, for invertible A and a
translation b.  Exact statistics over the whole family are computed in
rational arithmetic; experiments use seeded generators with per-trial
substreams so every report is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import linalg
from .ffield import make_field
from .linalg import FMatrix
from .shiftops import DEFAULT_MAX_CELLS
from .sumsets import DensePointSet, is_full, iterate_sumset

#: guard on |GL_n(F_p)| * p^n for full-family enumeration
DEFAULT_ENUM_GUARD = 10 ** 7


# ---------------------------------------------------------------------------
# cube partitions and hashes

@dataclass(frozen=True)
class CubePartition:
    """Equitable split of [0, p) into d integer intervals."""

    p: int
    d: int
    intervals: tuple[tuple[int, int], ...]  # half-open [lo, hi)


def make_partition(p: int, d: int) -> CubePartition:
    """Intervals I_i = [floor((i-1)p/d), floor(ip/d)) for i = 1..d."""
    if not (1 <= d <= p - 1):
        raise ValueError(f"need 1 <= d <= p-1, got d = {d}, p = {p}")
    intervals = tuple(((i - 1) * p // d, i * p // d) for i in range(1, d + 1))
    sizes = [hi - lo for lo, hi in intervals]
    assert sum(sizes) == p and intervals[0][0] == 0 and intervals[-1][1] == p
    assert max(sizes) - min(sizes) <= 1, "interval sizes differ by more than 1"
    return CubePartition(p, d, intervals)


def interval_labels(part: CubePartition) -> np.ndarray:
    """labels[residue] = 1-based interval index."""
    out = np.zeros(part.p, dtype=np.int64)
    for i, (lo, hi) in enumerate(part.intervals, start=1):
        out[lo:hi] = i
    return out


def rectangle_size(part: CubePartition, label) -> int:
    sizes = [hi - lo for lo, hi in part.intervals]
    return math.prod(sizes[i - 1] for i in label)


@dataclass
class AffineHash:
    """x -> d-cube label of Ax + b, for invertible A."""

    p: int
    matrix: np.ndarray  # (n, n) int
    shift: np.ndarray   # (n,) int
    d: int

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.int64) % self.p
        self.shift = np.asarray(self.shift, dtype=np.int64) % self.p
        n = self.matrix.shape[0]
        if self.matrix.shape != (n, n) or self.shift.shape != (n,):
            raise ValueError("matrix/shift shapes disagree")
        if not (1 <= self.d <= self.p - 1):
            raise ValueError("d out of range [1, p-1]")
        if _rank_mod_p(self.matrix, self.p) < n:
            raise ValueError("matrix is singular")


def hash_eval(h: AffineHash, x) -> tuple[int, ...]:
    part = make_partition(h.p, h.d)
    labels = interval_labels(part)
    y = (h.matrix @ np.asarray(x, dtype=np.int64) + h.shift) % h.p
    return tuple(int(labels[c]) for c in y)


# ---------------------------------------------------------------------------
# GL(F_p^n) sampling and enumeration

def _rank_mod_p(mat: np.ndarray, p: int) -> int:
    return linalg.rank(FMatrix(make_field(p, 1), np.asarray(mat) % p))


def _is_invertible(mat: np.ndarray, p: int) -> bool:
    n = mat.shape[0]
    if n == 1:
        return mat[0, 0] % p != 0
    if n == 2:
        return (mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]) % p != 0
    return _rank_mod_p(mat, p) == n


def sample_gl(p: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform invertible matrix by rejection from uniform matrices."""
    while True:
        mat = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if _is_invertible(mat, p):
            return mat


def gl_order(p: int, n: int) -> int:
    return math.prod(p ** n - p ** i for i in range(n))


def enumerate_gl(p: int, n: int):
    """All invertible n x n matrices over F_p, in lexicographic entry order."""
    from itertools import product

    for entries in product(range(p), repeat=n * n):
        mat = np.array(entries, dtype=np.int64).reshape(n, n)
        if _is_invertible(mat, p):
            yield mat


def _all_vectors(p: int, n: int) -> np.ndarray:
    from itertools import product

    return np.array(list(product(range(p), repeat=n)), dtype=np.int64)


# ---------------------------------------------------------------------------
# exact family statistics

@dataclass
class HashStats:
    p: int
    n: int
    d: int
    x: tuple[int, ...]
    y: tuple[int, ...]
    k: tuple[int, ...]
    l: tuple[int, ...]
    rect_k: int
    rect_l: int
    pr_x: Fraction
    pr_y: Fraction
    joint: Fraction
    cov: Fraction
    expected_pr_x: Fraction
    expected_pr_y: Fraction
    expected_cov: Fraction
    pair_counts_uniform: bool
    displayed_bound: Fraction
    bound_dominates: bool

    @property
    def matches_closed_forms(self) -> bool:
        return (self.pr_x == self.expected_pr_x
                and self.pr_y == self.expected_pr_y
                and self.cov == self.expected_cov
                and self.pair_counts_uniform)


def exact_hash_stats(p: int, n: int, d: int, x, y, k, l,
                     guard: int = DEFAULT_ENUM_GUARD) -> HashStats:
    """Full-family enumeration of the hash indicators at two points.

    Checks the closed forms: Pr[label(x) = k] = |R_k|/p^n; for x != y
    the joint distribution of (Ax+b, Ay+b) is uniform over distinct
    pairs; the covariance equals |R_k||R_l| / ((p^n-1) p^{2n}) for
    k != l.  For k = l the diagonal pairs s = t are impossible, so the
    joint count drops by |R_k| and the covariance is
    (|R_k|^2 - |R_k|)/((p^n-1)p^n) - |R_k|^2/p^{2n}.  Also reports
    whether the (2/(dp^2))^n bound dominates the exact covariance,
    which fails at small parameters.
    """
    x = tuple(int(v) % p for v in np.atleast_1d(x))
    y = tuple(int(v) % p for v in np.atleast_1d(y))
    k = tuple(int(v) for v in np.atleast_1d(k))
    l = tuple(int(v) for v in np.atleast_1d(l))
    if x == y:
        raise ValueError("the two evaluation points must differ")
    if len(x) != n or len(y) != n or len(k) != n or len(l) != n:
        raise ValueError("points and labels must have length n")
    part = make_partition(p, d)
    if not all(1 <= v <= d for v in k + l):
        raise ValueError("labels must lie in [1, d]^n")
    total_gl = gl_order(p, n)
    space = p ** n
    if total_gl * space > guard:
        raise ValueError(
            f"guard enum-maps: needs {total_gl * space}, limit {guard}")
    labels = interval_labels(part)
    bvecs = _all_vectors(p, n)
    xv = np.array(x, dtype=np.int64)
    yv = np.array(y, dtype=np.int64)
    kv = np.array(k, dtype=np.int64)
    lv = np.array(l, dtype=np.int64)
    count_x = count_y = count_joint = 0
    pair_counts = np.zeros((space, space), dtype=np.int64)
    radix = p ** np.arange(n - 1, -1, -1)
    for A in enumerate_gl(p, n):
        sx = (bvecs + A @ xv) % p  # (space, n)
        sy = (bvecs + A @ yv) % p
        hit_x = (labels[sx] == kv).all(axis=1)
        hit_y = (labels[sy] == lv).all(axis=1)
        count_x += int(hit_x.sum())
        count_y += int(hit_y.sum())
        count_joint += int((hit_x & hit_y).sum())
        np.add.at(pair_counts, (sx @ radix, sy @ radix), 1)
    total = total_gl * space
    pr_x = Fraction(count_x, total)
    pr_y = Fraction(count_y, total)
    joint = Fraction(count_joint, total)
    cov = joint - pr_x * pr_y
    rect_k = rectangle_size(part, k)
    rect_l = rectangle_size(part, l)
    off_diag = pair_counts[~np.eye(space, dtype=bool)]
    uniform = (pair_counts.diagonal() == 0).all() and \
        (off_diag == total_gl // (space - 1)).all()
    if k != l:
        expected_cov = Fraction(rect_k * rect_l, (space - 1) * space ** 2)
    else:
        expected_cov = (Fraction(rect_k * rect_l - rect_k, (space - 1) * space)
                        - Fraction(rect_k * rect_l, space ** 2))
    displayed = Fraction(2, d * p ** 2) ** n
    return HashStats(
        p, n, d, x, y, k, l, rect_k, rect_l, pr_x, pr_y, joint, cov,
        expected_pr_x=Fraction(rect_k, space),
        expected_pr_y=Fraction(rect_l, space),
        expected_cov=expected_cov,
        pair_counts_uniform=bool(uniform),
        displayed_bound=displayed,
        bound_dominates=bool(cov <= displayed),
    )


# ---------------------------------------------------------------------------
# surjectivity of a random hash on a fixed set

@dataclass
class SurjectivityResult:
    p: int
    n: int
    d: int
    set_size: int
    mode: str
    rate: Fraction | float
    samples: int
    reference_bound: Fraction
    bound_vacuous: bool


def _labels_cover(labels_set: set, d: int, n: int) -> bool:
    return len(labels_set) == d ** n


def surjectivity_rate(p: int, n: int, d: int, S, mode: str = "exact",
                      trials: int = 1000, seed: int = 0,
                      guard: int = DEFAULT_ENUM_GUARD) -> SurjectivityResult:
    """Probability that a uniform affine hash maps S onto all of [d]^n.

    Reported alongside the reference bound 1 - (9 d^2)^n / (c p) at
    c = |S|/p (so cp = |S|); the bound is vacuous when nonpositive.
    """
    S = [tuple(int(v) % p for v in np.atleast_1d(s)) for s in S]
    if len(set(S)) != len(S):
        raise ValueError("S must consist of distinct points")
    if not S:
        raise ValueError("S must be nonempty")
    part = make_partition(p, d)
    labels = interval_labels(part)
    bound = 1 - Fraction((9 * d * d) ** n, len(S))
    if mode == "exact":
        total_gl = gl_order(p, n)
        if total_gl * p ** n > guard:
            raise ValueError(
                f"guard enum-maps: needs {total_gl * p ** n}, limit {guard}")
        if n == 1:
            s_arr = np.array([s[0] for s in S], dtype=np.int64)
            a_arr = np.arange(1, p, dtype=np.int64)
            b_arr = np.arange(p, dtype=np.int64)
            vals = (a_arr[:, None, None] * s_arr[None, None, :]
                    + b_arr[None, :, None]) % p
            lab = labels[vals]  # (p-1, p, |S|)
            covered = np.ones(lab.shape[:2], dtype=bool)
            for i in range(1, d + 1):
                covered &= (lab == i).any(axis=2)
            count = int(covered.sum())
            total = (p - 1) * p
        else:
            pts = np.array(S, dtype=np.int64)
            bvecs = _all_vectors(p, n)
            count, total = 0, total_gl * p ** n
            for A in enumerate_gl(p, n):
                base = (pts @ A.T) % p  # (|S|, n)
                for b in bvecs:
                    lab = labels[(base + b) % p]
                    if _labels_cover({tuple(row) for row in lab}, d, n):
                        count += 1
        rate: Fraction | float = Fraction(count, total)
        samples = total
    elif mode == "montecarlo":
        rng = np.random.default_rng(seed)
        pts = np.array(S, dtype=np.int64)
        count = 0
        for _ in range(trials):
            A = sample_gl(p, n, rng)
            b = rng.integers(0, p, size=n, dtype=np.int64)
            lab = labels[(pts @ A.T + b) % p]
            if _labels_cover({tuple(row) for row in lab}, d, n):
                count += 1
        rate = count / trials
        samples = trials
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return SurjectivityResult(p, n, d, len(S), mode, rate, samples,
                              reference_bound=bound,
                              bound_vacuous=bound <= 0)


# ---------------------------------------------------------------------------
# random expansion experiment

@dataclass(frozen=True)
class TrialConfig:
    p: int
    n: int
    c: float
    trials: int
    seed: int

    def __post_init__(self):
        if not (0 < self.c < 1):
            raise ValueError("c must lie in (0, 1)")
        if self.trials < 1:
            raise ValueError("need at least one trial")


@dataclass
class ExpansionExperiment:
    config: TrialConfig
    folds: int
    successes: int
    rate: float
    records: list[dict] = dc_field(default_factory=list)


def _sample_distinct_points(p: int, n: int, count: int,
                            rng: np.random.Generator) -> list[tuple[int, ...]]:
    """Uniform random set of `count` distinct points (collisions resampled)."""
    seen: list[tuple[int, ...]] = []
    taken = set()
    while len(seen) < count:
        pt = tuple(int(v) for v in rng.integers(0, p, size=n))
        if pt not in taken:
            taken.add(pt)
            seen.append(pt)
    return seen


def random_expansion_trial(cfg: TrialConfig,
                           max_cells: int = DEFAULT_MAX_CELLS) -> ExpansionExperiment:
    """Sample uniform (n+2)-point sets and test whether their
    ceil(c p)-fold sumset covers the space; per-trial RNG substreams."""
    F = make_field(cfg.p, 1)
    if cfg.p ** cfg.n > max_cells:
        raise ValueError(
            f"guard max-cells: needs {cfg.p ** cfg.n}, limit {max_cells}")
    folds = math.ceil(cfg.c * cfg.p)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    records = []
    successes = 0
    for t, child in enumerate(children):
        rng = np.random.default_rng(child)
        pts = _sample_distinct_points(cfg.p, cfg.n, cfg.n + 2, rng)
        S = DensePointSet.from_points(F, cfg.n, pts, max_cells=max_cells)
        folded = iterate_sumset(S, folds)
        ok = is_full(folded)
        successes += ok
        records.append({"trial": t, "points": [list(pt) for pt in pts],
                        "success": bool(ok),
                        "covered": folded.cardinality()})
    return ExpansionExperiment(cfg, folds, successes,
                               successes / cfg.trials, records)


# ---------------------------------------------------------------------------
# affine span rate

@dataclass
class SpanRateResult:
    p: int
    n: int
    trials: int
    rate: float
    reference: Fraction  # prod_{i=1..n} (1 - p^-i)


def span_reference(p: int, n: int) -> Fraction:
    return math.prod((Fraction(1) - Fraction(1, p ** i) for i in range(1, n + 1)),
                     start=Fraction(1))


def _affinely_independent(p: int, pts) -> bool:
    base = pts[0]
    diffs = (np.array(pts[1:], dtype=np.int64) - base) % p
    return _rank_mod_p(diffs, p) == len(pts) - 1


def affine_span_rate(p: int, n: int, trials: int, seed: int = 0) -> SpanRateResult:
    """Fraction of uniform independent (n+1)-point draws (with
    replacement) that affinely span the space."""
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(trials):
        pts = [tuple(int(v) for v in rng.integers(0, p, size=n))
               for _ in range(n + 1)]
        hits += _affinely_independent(p, pts)
    return SpanRateResult(p, n, trials, hits / trials, span_reference(p, n))


# ---------------------------------------------------------------------------
# proof-replay diagnostic

def proof_replay(p: int, n: int, c: float, points,
                 max_cells: int = DEFAULT_MAX_CELLS) -> dict:
    """Replay the internal steps of the random-expansion argument on one
    sampled (n+2)-point set and report which step fails (expected at
    small p).  Diagnostic only; never the success criterion.
    """
    F = make_field(p, 1)
    pts = [tuple(int(v) % p for v in pt) for pt in points]
    if len(pts) != n + 2:
        raise ValueError("replay needs exactly n + 2 points")
    steps = []

    spanning = _affinely_independent(p, pts[: n + 1])
    steps.append({"step": "affine-span", "pass": bool(spanning),
                  "detail": "first n+1 points affinely independent"})

    d = math.ceil(7 * n / c)
    d_ok = 1 <= d <= p - 1
    steps.append({"step": "cube-count", "pass": bool(d_ok),
                  "detail": f"d = ceil(7n/c) = {d} within [1, p-1]"})

    half = int(c * p / 2)
    radius = 2 * int(c * p / (6 * n))
    box_ok = None
    if radius <= p - 1 and half >= 1:
        basis = [tuple([0] * n)] + [
            tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        B0 = DensePointSet.from_points(F, n, basis, max_cells=max_cells)
        folded0 = iterate_sumset(B0, half)
        from itertools import product as iproduct

        box_ok = all(folded0.contains(pt)
                     for pt in iproduct(range(radius + 1), repeat=n))
    steps.append({"step": "box-coverage", "pass": bool(box_ok),
                  "detail": f"{half}-fold basis sums cover [0, {radius}]^n"
                  if box_ok is not None else "skipped: box leaves the grid"})

    hash_ok = None
    if spanning and d_ok:
        base = np.array(pts[0], dtype=np.int64)
        cols = (np.array(pts[1: n + 1], dtype=np.int64) - base).T % p
        inv = linalg.inverse(FMatrix(make_field(p, 1), cols))
        M = inv.data
        shift = (-(M @ base)) % p
        x = np.array(pts[n + 1], dtype=np.int64)
        S_prog = [(j * x) % p for j in range(1, half + 1)]
        part = make_partition(p, d)
        labels = interval_labels(part)
        seen = {tuple(int(v) for v in labels[(M @ s + shift) % p])
                for s in S_prog}
        hash_ok = len(seen) == d ** n
    steps.append({"step": "hash-surjects", "pass": bool(hash_ok),
                  "detail": "progression image meets every rectangle"
                  if hash_ok is not None
                  else "skipped: earlier step failed"})

    S = DensePointSet.from_points(F, n, pts, max_cells=max_cells)
    full = is_full(iterate_sumset(S, math.ceil(c * p)))
    steps.append({"step": "conclusion", "pass": bool(full),
                  "detail": f"{math.ceil(c * p)}-fold sumset covers the space"})

    failing = next((s["step"] for s in steps if not s["pass"]), None)
    return {"steps": steps, "first_failure": failing}
