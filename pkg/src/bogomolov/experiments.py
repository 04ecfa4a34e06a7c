"""Censuses, closed-form checks at d = 4, Monte-Carlo runs and parameter sweeps."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor

import numpy as np
from scipy.stats import binomtest

from . import kernels
from .core import (
    GroupParameters,
    bogomolov,
    closure_dims,
    closure_strategy,
    torsion_witness_d4,
)
from .errors import BudgetExceeded, IndeterminacyLocus, ParameterError
from .exterior import basis_index, wedge, wedge_product
from .grassmannian import (
    DEFAULT_BUDGET,
    gaussian_binomial,
    iter_batches,
    sample_rref_batch,
    sparse_first_points,
)
from .linalg import Field, Subspace
from .morphism import (
    block_certificate,
    canonical_submersion_tuple,
    construction_info,
    coordinate_plane_tuple,
    differential,
    in_image_of_psi,
    psi,
    psi_fibre_size,
    random_construction,
    random_plane_tuple,
    random_rational_tuple,
)
from .orbits import orbit_ranks, primitive_root

BATCH = 1 << 14


@dataclass
class CensusReport:
    p: int
    d: int
    r: int
    mode: str
    total: int
    in_image: int
    b0_histogram: dict
    trials: int | None = None
    seed: int | None = None
    runtime_ms: float = 0.0
    nonimage_ranks: np.ndarray | None = field(default=None, repr=False)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.in_image, self.total)

    def interval(self, level: float = 0.95) -> tuple[float, float]:
        ci = binomtest(self.in_image, self.total).proportion_ci(level, method="wilson")
        return ci.low, ci.high


def _histogram(b0: np.ndarray, into: dict):
    for k, v in zip(*np.unique(b0, return_counts=True)):
        into[int(k)] = into.get(int(k), 0) + int(v)


def census(p, d, r, mode="exhaustive", trials=1000, seed=0, budget=DEFAULT_BUDGET, keep_nonimage=False) -> CensusReport:
    """Decomposable-closure statistics over Gr(r, Lambda^2 F_p^d).

    ``exhaustive`` visits every subspace once; ``sampled`` draws ``trials``
    uniform subspaces from ``numpy.random.default_rng(seed)``.
    """
    N = comb(d, 2)
    if d < 2 or not 0 <= r <= N:
        raise ParameterError(f"need d >= 2 and 0 <= r <= {N}")
    Field.prime(p)
    start = time.perf_counter()
    hist: dict = {}
    bad = []
    if mode == "exhaustive":
        total = gaussian_binomial(N, r, p).value
        if total > budget:
            raise BudgetExceeded(total, budget, f"census of Gr({r},{N}) over F_{p}")
        closure_strategy(r, d, p)
        if r == 0:
            hist[0] = 1
        else:
            for offset, B in iter_batches(r, N, p, BATCH):
                b0 = r - closure_dims(B, d, p)
                _histogram(b0, hist)
                if keep_nonimage:
                    bad.append(offset + np.nonzero(b0)[0])
        rep = CensusReport(p, d, r, mode, total, hist.get(0, 0), hist)
    elif mode == "sampled":
        if trials < 1:
            raise ParameterError("trials must be positive")
        closure_strategy(r, d, p)
        rng = np.random.default_rng(seed)
        done = 0
        while done < trials:
            m = min(BATCH, trials - done)
            B = sample_rref_batch(r, N, p, m, rng)
            b0 = r - closure_dims(B, d, p) if r else np.zeros(m, dtype=np.int64)
            _histogram(b0, hist)
            done += m
        rep = CensusReport(p, d, r, mode, trials, hist.get(0, 0), hist, trials=trials, seed=seed)
    else:
        raise ParameterError(f"unknown mode {mode!r}")
    if keep_nonimage:
        rep.nonimage_ranks = np.concatenate(bad) if bad else np.zeros(0, dtype=np.int64)
    rep.runtime_ms = (time.perf_counter() - start) * 1e3
    return rep


# -- d = 4 ---------------------------------------------------------------------


def _pair_vec(d, p, terms):
    look = basis_index(d)
    w = np.zeros(comb(d, 2), dtype=np.int64)
    for c, i, j in terms:
        w[look.pair(i, j)] += c
    return w % p


def subspace_A(p: int) -> Subspace:
    """``<v1^v2 - v3^v4, v2^v4 - w v1^v3, v1^v4>`` with ``w`` the smallest primitive root."""
    w = primitive_root(p)
    rows = [
        _pair_vec(4, p, [(1, 0, 1), (-1, 2, 3)]),
        _pair_vec(4, p, [(1, 1, 3), (-w, 0, 2)]),
        _pair_vec(4, p, [(1, 0, 3)]),
    ]
    return Subspace.from_rows(np.array(rows), Field.prime(p), 6)


def subspace_B(p: int) -> Subspace:
    """``<v1^v2 - v3^v4, v1^v3, v1^v4>``."""
    rows = [
        _pair_vec(4, p, [(1, 0, 1), (-1, 2, 3)]),
        _pair_vec(4, p, [(1, 0, 2)]),
        _pair_vec(4, p, [(1, 0, 3)]),
    ]
    return Subspace.from_rows(np.array(rows), Field.prime(p), 6)


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


def count_complementary_pairs(p: int, d: int = 4) -> int:
    """Ordered pairs of 2-planes of F_p^4 meeting only in 0.

    Two planes are complementary iff their volume forms pair to a nonzero
    multiple of the top form.
    """
    F = Field.prime(p)
    planes = np.concatenate([B for _, B in iter_batches(2, d, p, 1 << 16)])
    vols = wedge(planes[:, 0], planes[:, 1], F)
    count = 0
    for lo in range(0, len(vols), 512):
        pair = wedge_product(vols[lo : lo + 512, None, :], vols[None, :, :], F, d)
        count += int(pair.any(axis=-1).sum())
    return count


def verify_d4(p: int, fibre_samples: int = 100, seed: int = 0, budget: int = DEFAULT_BUDGET) -> list[Check]:
    checks = []
    F = Field.prime(p)
    rep = census(p, 4, 1, budget=budget)
    want = Fraction(p * p + 1, p**3 + 1)
    checks.append(Check("r=1 fraction", rep.fraction == want, {"fraction": str(rep.fraction), "expected": str(want)}))

    X = count_complementary_pairs(p)
    want_x = p**4 * (p * p + 1) * (p * p + p + 1)
    rng = np.random.default_rng(seed)
    sizes = []
    while len(sizes) < fibre_samples:
        t = random_plane_tuple(4, 2, p, rng)
        if Subspace.from_rows(np.vstack([P.basis for P in t.planes]), F, 4).dim == 4:
            sizes.append(psi_fibre_size(psi(t), 4))
    checks.append(Check("r=2 |X|", X == want_x, {"count": X, "expected": want_x}))
    checks.append(Check("r=2 fibres", all(s == 2 for s in sizes), {"samples": len(sizes), "sizes": sorted(set(sizes))}))

    A, B = subspace_A(p), subspace_B(p)
    rep3 = census(p, 4, 3, budget=budget, keep_nonimage=True)
    total = gaussian_binomial(6, 3, p).value
    orbit = orbit_ranks([A, B], 4, p, budget=budget)
    oa = orbit_ranks([A], 4, p, budget=budget)
    ob = orbit_ranks([B], 4, p, budget=budget)
    checks.append(Check("r=3 A, B outside image", not in_image_of_psi(A, 4) and not in_image_of_psi(B, 4)))
    checks.append(Check("r=3 total", rep3.total == total, {"total": rep3.total, "expected": total}))
    checks.append(Check(
        "r=3 complement = orbit(A) u orbit(B)",
        np.array_equal(np.sort(rep3.nonimage_ranks), orbit),
        {"complement": int(rep3.nonimage_ranks.size), "orbit_A": int(oa.size), "orbit_B": int(ob.size)},
    ))
    for r in (4, 5, 6):
        rr = census(p, 4, r, budget=budget)
        checks.append(Check(f"r={r} surjective", rr.fraction == 1, {"fraction": str(rr.fraction)}))
    return checks


def low_codimension_sweep(d: int, p: int, max_codim: int = 2, budget: int = DEFAULT_BUDGET) -> dict:
    """Count subspaces of codimension ``<= max_codim`` in Lambda^2 F_p^d outside the image.

    A subspace is given by its annihilator, so codimension ``c`` means a
    c-dimensional space of functionals; the pencil scan works directly on it.
    """
    N = comb(d, 2)
    idx = basis_index(d)
    vpts = sparse_first_points(d, p)
    out = {}
    for c in range(max_codim + 1):
        total = gaussian_binomial(N, c, p).value
        if total > budget:
            raise BudgetExceeded(total, budget, f"codimension-{c} sweep")
        if c == 0:
            out[c] = {"total": 1, "outside": 0}
            continue
        outside = 0
        for _, ann in iter_batches(c, N, p, 1 << 16):
            dims, _ = kernels.pencil_closure(ann, idx.pair_i, idx.pair_j, d, vpts, p)
            outside += int((dims < N - c).sum())
        out[c] = {"total": total, "outside": outside}
    return out


# -- Monte Carlo -----------------------------------------------------------------


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


def paper_bound(p: int, d: int, r: int) -> dict | None:
    """Applicable asymptotic bound for the image fraction at ``(p, d, r)``."""
    m = comb(d - 2, 2)
    if d >= 4 and 1 <= r <= m:
        delta = m - r - 3
        e = delta * r
        value = Fraction(1, p**e) if e >= 0 else Fraction(p**-e)
        return {"name": "small_r_upper", "kind": "upper", "delta": delta, "value": value, "vacuous": e <= 0}
    if d >= 3 and r >= m + 1:
        return {
            "name": "catalan_lower",
            "kind": "lower_liminf",
            "catalan": catalan(d - 2),
            "value": Fraction(1, catalan(d - 2) ** r),
        }
    return None


def sample_experiment(p, d, r, trials, seed=0):
    """Sampled census plus the matching bound; the lower bound is a p -> infinity proxy."""
    rep = census(p, d, r, mode="sampled", trials=trials, seed=seed)
    bound = paper_bound(p, d, r)
    lo, hi = rep.interval()
    info = {"ci95": [lo, hi]}
    if bound is not None:
        v = float(bound["value"])
        if bound["kind"] == "upper":
            info["consistent"] = lo <= v
        else:
            info["consistent"] = rep.in_image / rep.total >= v
            info["note"] = "asymptotic liminf, per-p comparison only"
    if d == 4 and r == 1:
        exact = Fraction(p * p + 1, p**3 + 1)
        sigma = (float(exact) * (1 - float(exact)) / trials) ** 0.5
        info["exact"] = exact
        info["z"] = (rep.in_image / trials - float(exact)) / sigma if sigma else 0.0
    return rep, bound, info


# -- log-generic sweep -------------------------------------------------------------


@dataclass(frozen=True)
class LogGenericParams:
    n: int
    alpha: Fraction
    p: int
    d: int
    r: int
    rho: int


def loggeneric_params(p: int, n: int, alpha) -> LogGenericParams:
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ParameterError("alpha must lie in (0, 1)")
    d = floor(alpha * n)
    r = comb(d, 2) + d - n
    if d < 2 or r <= 0:
        raise ParameterError(f"degenerate parameters: d={d}, r={r}")
    Field.prime(p)
    return LogGenericParams(n, alpha, p, d, r, n - d)


def loggeneric(p, n, alpha, trials=200, seed=0):
    lp = loggeneric_params(p, n, alpha)
    rep = census(p, lp.d, lp.r, mode="sampled", trials=trials, seed=seed)
    out = {
        "params": lp,
        "report": rep,
        "fraction_b0_positive": Fraction(rep.total - rep.in_image, rep.total),
        "count_exponent": comb(lp.d, 2) * lp.rho,
    }
    try:
        info = construction_info(lp.d, lp.r, 1, p)
    except ParameterError:
        info = None
    out["construction"] = info
    if info is not None and info.lemma_hypotheses_hold:
        out["lemma_bound"] = info.lemma_bound
    return out


def construction_check(p, d, r, members, seed=0, N=1, strict=True) -> dict:
    """Build ``members`` random constructed subspaces and verify ``b0 >= N`` exactly."""
    info = construction_info(d, r, N, p)
    rng = np.random.default_rng(seed)
    b0s, certified = [], 0
    for _ in range(members):
        S = random_construction(d, r, N, p, rng, strict=strict)
        b0s.append(bogomolov(GroupParameters(p, d, S)).b0_dim)
        certified += S.dim - block_certificate(S, d, N).dim >= N
    return {
        "info": info,
        "members": members,
        "min_b0": min(b0s) if b0s else None,
        "all_ok": all(b >= N for b in b0s) and certified == members,
        "certified": certified,
        "count_ok": info.distinct_members >= info.lemma_bound,
    }


# -- wrappers --------------------------------------------------------------------------


def torsion_example(p):
    return torsion_witness_d4(p)


def submersion_check(d, field: Field, lam_seed=None, random_trials=0, seed=0, r=None) -> dict:
    """Differential at the canonical tuple (or ``r`` coordinate planes) plus random tuples."""
    m = comb(d - 2, 2)
    rng = np.random.default_rng(seed)
    if r is None or r == m + 1:
        lam = None
        if lam_seed is not None:
            lrng = np.random.default_rng(lam_seed)
            hi = field.p - 1 if field.is_prime else 10**6
            lam = [int(x) for x in lrng.choice(np.arange(1, hi + 1), size=m, replace=False)]
        t = canonical_submersion_tuple(d, lam, field)
        predicted = {"submersion": True, "immersion": True}
    else:
        t = coordinate_plane_tuple(d, r, field)
        predicted = {"immersion": True, "submersion": False} if r <= m else {}
    rep = differential(t)
    ok = all(getattr(rep, f"is_{k}") == v for k, v in predicted.items())
    rr = t.r
    randoms = {"trials": random_trials, "submersion": 0, "immersion": 0, "disagreements": 0}
    for _ in range(random_trials):
        tt = random_plane_tuple(d, rr, field.p, rng) if field.is_prime else random_rational_tuple(d, rr, rng)
        try:
            dr = differential(tt)
        except IndeterminacyLocus:
            continue
        randoms["submersion"] += dr.is_submersion
        randoms["immersion"] += dr.is_immersion
        randoms["disagreements"] += not dr.criteria_agree
    return {"tuple_r": rr, "report": rep, "predicted": predicted, "ok": ok, "random": randoms}
