"""Counting, enumerating, ranking and sampling points of Gr(k, n) over F_p.

A k-dimensional subspace of F_p^n is identified with its RREF basis. Pivot
patterns are visited in colexicographic order; inside a pattern the free
entries (row-major) run like an odometer with the last entry fastest. This
fixes a global rank ``0 <= idx < |Gr(k, n)|`` used for chunking and orbits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations

import numpy as np

from . import kernels
from .errors import BudgetExceeded, ParameterError
from .linalg import Field, Subspace

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class GaussianBinomial:
    n: int
    k: int
    p: int
    value: int
    lower_bound: int | Fraction
    upper_bound: int


def gaussian_binomial(n: int, k: int, p: int) -> GaussianBinomial:
    """Exact ``|Gr(k, n)|`` over F_p with the bounds ``p^(k(n-k) -+ k)``."""
    if k < 0 or n < 0:
        raise ParameterError("n and k must be nonnegative")
    if k > n:
        raise ParameterError(f"k={k} exceeds n={n}")
    num = 1
    den = 1
    for i in range(k):
        num *= p**n - p**i
        den *= p**k - p**i
    value, rem = divmod(num, den)
    assert rem == 0
    e = k * (n - k)
    # exponent e - k is negative only for k = n; keep the bound exact there
    lower = p ** (e - k) if e >= k else Fraction(1, p ** (k - e))
    return GaussianBinomial(n, k, p, value, lower, p ** (e + k))


def colex_patterns(k: int, n: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(n), k), key=lambda c: c[::-1])


class RankTable:
    """Pivot-pattern bookkeeping for ranking RREF bases of Gr(k, n) over F_p."""

    def __init__(self, k: int, n: int, p: int):
        if k > n:
            raise ParameterError(f"k={k} exceeds n={n}")
        self.k, self.n, self.p = k, n, p
        pats = colex_patterns(k, n)
        self.pattern_list = pats
        free_lists = []
        for piv in pats:
            pivset = set(piv)
            free_lists.append(
                [i * n + j for i, c in enumerate(piv) for j in range(c + 1, n) if j not in pivset]
            )
        maxfree = max((len(f) for f in free_lists), default=0)
        self.nfree = np.array([len(f) for f in free_lists], dtype=np.int64)
        self.freepos = np.zeros((len(pats), max(maxfree, 1)), dtype=np.int64)
        for t, f in enumerate(free_lists):
            self.freepos[t, : len(f)] = f
        self.patterns = np.array(pats, dtype=np.int64).reshape(len(pats), k)
        offs = [0]
        for nf in self.nfree:
            offs.append(offs[-1] + p ** int(nf))
        self.offsets_py = offs
        self.total = offs[-1]

    @cached_property
    def offsets(self) -> np.ndarray:
        if self.total >= 1 << 62:
            raise BudgetExceeded(self.total, 1 << 62, "ranking")
        return np.array(self.offsets_py, dtype=np.int64)

    @cached_property
    def mask_to_pat(self) -> np.ndarray:
        if self.n > 22:
            raise BudgetExceeded(1 << self.n, 1 << 22, "pivot-mask table")
        table = -np.ones(1 << self.n, dtype=np.int64)
        for t, piv in enumerate(self.pattern_list):
            table[sum(1 << c for c in piv)] = t
        return table

    def pattern_count(self, t: int) -> int:
        return self.offsets_py[t + 1] - self.offsets_py[t]

    def batch(self, t: int, lo: int, hi: int) -> np.ndarray:
        """RREF bases for local ranks ``lo..hi-1`` of pattern ``t``: shape ``(hi-lo, k, n)``."""
        k, n, p = self.k, self.n, self.p
        m = hi - lo
        out = np.zeros((m, k * n), dtype=np.int64)
        local = np.arange(lo, hi, dtype=np.int64)
        for s in range(int(self.nfree[t]) - 1, -1, -1):
            out[:, self.freepos[t, s]] = local % p
            local //= p
        for i, c in enumerate(self.pattern_list[t]):
            out[:, i * n + c] = 1
        return out.reshape(m, k, n)

    def rank(self, R: np.ndarray) -> np.ndarray:
        R = np.asarray(R, dtype=np.int64)
        if R.ndim == 2:
            R = R[None]
        return kernels.rank_rref(R, self.p, self)

    def unrank(self, idx) -> np.ndarray:
        return kernels.unrank_batch(np.atleast_1d(np.asarray(idx, dtype=np.int64)), self.p, self)


@lru_cache(maxsize=64)
def rank_table(k: int, n: int, p: int) -> RankTable:
    return RankTable(k, n, p)


def iter_batches(k, n, p, batch_size=1 << 15, patterns=None):
    """Yield ``(offset, bases)`` with ``bases`` of shape ``(m, k, n)`` in global rank order."""
    table = rank_table(k, n, p)
    ids = range(len(table.pattern_list)) if patterns is None else patterns
    for t in ids:
        cnt = table.pattern_count(t)
        base = table.offsets_py[t]
        for lo in range(0, cnt, batch_size):
            hi = min(cnt, lo + batch_size)
            yield base + lo, table.batch(t, lo, hi)


class SubspaceStream:
    """Every point of Gr(k, n) over F_p exactly once, as RREF :class:`Subspace` values."""

    def __init__(self, k: int, n: int, p: int, budget: int = DEFAULT_BUDGET):
        self.k, self.n, self.p = k, n, p
        self.field = Field.prime(p)
        self.count = gaussian_binomial(n, k, p).value
        if self.count > budget:
            raise BudgetExceeded(self.count, budget, f"Gr({k},{n}) over F_{p}")
        self.table = rank_table(k, n, p)

    def __len__(self):
        return self.count

    @property
    def n_patterns(self) -> int:
        return len(self.table.pattern_list)

    def batches(self, batch_size=1 << 15, patterns=None):
        return iter_batches(self.k, self.n, self.p, batch_size, patterns)

    def chunks(self, n_chunks: int) -> list[list[int]]:
        """Split the pivot patterns into ``n_chunks`` independent, roughly even groups."""
        groups = [[] for _ in range(max(1, n_chunks))]
        loads = [0] * len(groups)
        order = sorted(range(self.n_patterns), key=lambda t: -self.table.pattern_count(t))
        for t in order:
            g = loads.index(min(loads))
            groups[g].append(t)
            loads[g] += self.table.pattern_count(t)
        return [sorted(g) for g in groups]

    def __iter__(self):
        if self.k == 0:
            yield Subspace.zero(self.field, self.n)
            return
        for _, B in self.batches():
            for R in B:
                yield Subspace.from_rref(R, self.field)


def enumerate_subspaces(k: int, n: int, p: int, budget: int = DEFAULT_BUDGET) -> SubspaceStream:
    if k > n or k < 0:
        raise ParameterError(f"need 0 <= k <= n, got k={k}, n={n}")
    return SubspaceStream(k, n, p, budget)


@lru_cache(maxsize=64)
def projective_points(n: int, p: int) -> np.ndarray:
    """Normalized representatives (first nonzero entry 1) of P(F_p^n)."""
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    pts = np.concatenate([B[:, 0, :] for _, B in iter_batches(1, n, p, 1 << 20)])
    pts.setflags(write=False)
    return pts


def sample_subspace(k: int, n: int, p: int, rng: np.random.Generator) -> Subspace:
    """Uniform point of Gr(k, n): rejection-sample a full-rank k x n matrix."""
    if k > n or k < 0:
        raise ParameterError(f"need 0 <= k <= n, got k={k}, n={n}")
    field = Field.prime(p)
    if k == 0:
        return Subspace.zero(field, n)
    while True:
        M = rng.integers(0, p, size=(1, k, n))
        R, r = kernels.rref_batch(M, p)
        if r[0] == k:
            return Subspace.from_rref(R[0], field)


def sample_rref_batch(k: int, n: int, p: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent uniform points of Gr(k, n) as RREF bases ``(count, k, n)``."""
    out = np.zeros((count, k, n), dtype=np.int64)
    filled = 0
    while filled < count:
        need = count - filled
        M = rng.integers(0, p, size=(need + need // 4 + 1, k, n))
        R, r = kernels.rref_batch(M, p)
        good = R[r == k][:need]
        out[filled : filled + len(good)] = good
        filled += len(good)
    return out


@lru_cache(maxsize=64)
def sparse_first_points(n: int, p: int) -> np.ndarray:
    """:func:`projective_points` reordered by support size (stable).

    Scans that stop once a span is full finish sooner on sparse vectors.
    """
    pts = projective_points(n, p)
    out = pts[np.argsort((pts != 0).sum(axis=1), kind="stable")]
    out.setflags(write=False)
    return out
