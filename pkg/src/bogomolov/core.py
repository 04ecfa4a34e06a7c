"""Bogomolov multipliers of exponent-p class-2 groups G_L.

A subspace ``L`` of ``W = Lambda^2 F_p^d`` determines the Lie algebra
``V + W/L`` with bracket ``[v1 + w1, v2 + w2] = pi(v1 ^ v2)`` and, through the
class-2 Baker-Campbell-Hausdorff formula, the group G_L of order
``p^(d + dim W - dim L)``. Its Bogomolov multiplier is ``L / L^``, where
``L^`` is the span of the decomposable bivectors lying in ``L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dc_field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb, gcd, isqrt

import numpy as np

from . import kernels
from .errors import BudgetExceeded, ParameterError
from .exterior import (
    _dim_from_len,
    basis_index,
    quadric_system,
    wedge,
    wedge_square,
)
from .grassmannian import iter_batches, projective_points, sparse_first_points
from .linalg import Field, Subspace, kernel_basis, rank
from .snf import smith_normal_form

CLOSURE_BUDGET = 10**7
# largest point table materialized for the scan over P(L)
_MAX_POINT_TABLE = 2 * 10**6


def _proj_count(n: int, p: int) -> int:
    return (p**n - 1) // (p - 1)


def closure_strategy(r: int, d: int, p: int, budget: int = CLOSURE_BUDGET) -> str:
    """Pick the cheaper exact scan: over P(L) (``"points"``) or over P(V) (``"pencil"``)."""
    if r == 0 or d <= 3:
        return "trivial"
    cost_points = _proj_count(r, p)
    cost_pencil = _proj_count(d, p)
    if cost_points <= min(cost_pencil, _MAX_POINT_TABLE):
        if cost_points > budget:
            raise BudgetExceeded(cost_points, budget, "closure scan")
        return "points"
    if cost_pencil > budget:
        raise BudgetExceeded(min(cost_points, cost_pencil), budget, "closure scan")
    return "pencil"


def annihilators(R: np.ndarray, p: int) -> np.ndarray:
    """Annihilator rows for a stack of full-rank RREF bases ``(m, r, N)`` -> ``(m, N - r, N)``."""
    m, r, N = R.shape
    out = np.zeros((m, N - r, N), dtype=np.int64)
    if m == 0 or N == r:
        return out
    lead = (R != 0).argmax(axis=2) if r else np.zeros((m, 0), dtype=np.int64)
    keys = np.zeros(m, dtype=np.int64) if r == 0 else (np.int64(1) << lead).sum(axis=1)
    for key in np.unique(keys):
        rows = np.nonzero(keys == key)[0]
        piv = [c for c in range(N) if (int(key) >> c) & 1]
        free = [c for c in range(N) if not (int(key) >> c) & 1]
        A = np.zeros((rows.size, len(free), N), dtype=np.int64)
        A[:, np.arange(len(free)), free] = 1
        for i, c in enumerate(piv):
            A[:, :, c] = (-R[rows][:, i, free]) % p
        out[rows] = A
    return out


def closure_dims(bases: np.ndarray, d: int, p: int, budget: int = CLOSURE_BUDGET, strategy=None):
    """``dim L^`` for a stack of RREF bases ``(m, r, C(d, 2))``."""
    bases = np.asarray(bases, dtype=np.int64)
    m, r, _ = bases.shape
    strategy = strategy or closure_strategy(r, d, p, budget)
    if strategy == "trivial":
        return np.full(m, r, dtype=np.int64)
    if strategy == "points":
        Q = quadric_system(bases, Field.prime(p), d)
        dims, _ = kernels.point_closure(Q, projective_points(r, p), p)
        return dims
    idx = basis_index(d)
    dims, _ = kernels.pencil_closure(
        annihilators(bases, p), idx.pair_i, idx.pair_j, d, sparse_first_points(d, p), p
    )
    return dims


def decomposable_closure(L: Subspace, d: int | None = None, budget: int = CLOSURE_BUDGET, strategy=None) -> Subspace:
    """``L^ = span(DW & L)``: the span of all decomposable bivectors inside ``L``.

    Both scans are exhaustive and exact. ``"points"`` tests every projective
    point of ``L`` against the quadric system of ``w ^ w = 0``; ``"pencil"``
    runs over ``v`` in P(V) and collects ``v ^ K_v`` with
    ``K_v = {w : v ^ w in L}``, a linear condition on ``w``.
    """
    field = L.field
    if not field.is_prime:
        raise ParameterError("decomposable closure is computed over F_p only")
    p = field.p
    if d is None:
        d = _dim_from_len(L.ambient)
    r = L.dim
    strategy = strategy or closure_strategy(r, d, p, budget)
    if strategy == "trivial":
        return L
    if strategy == "points":
        Q = quadric_system(L.basis[None], field, d)
        dims, span = kernels.point_closure(Q, projective_points(r, p), p)
        k = int(dims[0])
        if k == 0:
            return Subspace.zero(field, L.ambient)
        return Subspace.from_rows(field.matmul(span[0, :k], L.basis), field, L.ambient)
    idx = basis_index(d)
    ann = L.annihilator()[None]
    dims, span = kernels.pencil_closure(ann, idx.pair_i, idx.pair_j, d, sparse_first_points(d, p), p)
    k = int(dims[0])
    if k == 0:
        return Subspace.zero(field, L.ambient)
    return Subspace.from_rows(span[0, :k], field, L.ambient)


def closure_upper_bound(L: Subspace, blocks, d: int | None = None) -> Subspace:
    """A subspace of ``L`` that provably contains ``L^``.

    For a coordinate block ``S`` the projection ``Lambda^2 V -> Lambda^2 V_S``
    sends ``u ^ v`` to ``u_S ^ v_S``, so decomposables of ``L`` land in the
    closure of the projected space. Each block contributes that constraint.
    """
    field = L.field
    if d is None:
        d = _dim_from_len(L.ambient)
    look = basis_index(d)
    G = L.basis
    cons = []
    for S in blocks:
        S = sorted(S)
        cols = [look.pair(a, b) for a, b in combinations(S, 2)]
        proj = G[:, cols]
        image = Subspace.from_rows(proj, field, len(cols)) if len(proj) else Subspace.zero(field, len(cols))
        C = _small_closure(image, len(S))
        ann = C.annihilator()
        if len(ann):
            cons.append(field.matmul(ann, proj.T))
    if not cons:
        return L
    K = kernel_basis(np.vstack(cons), field)
    if K.dim == 0:
        return Subspace.zero(field, L.ambient)
    return Subspace.from_rows(field.matmul(K.basis, G), field, L.ambient)


def _small_closure(L: Subspace, d: int) -> Subspace:
    # lines are decided directly, which also covers the rational field
    if L.dim <= 1 or d <= 3:
        if L.dim == 1 and d >= 4 and wedge_square(L.basis[0], L.field, d).any():
            return Subspace.zero(L.field, L.ambient)
        return L
    return decomposable_closure(L, d)


@dataclass(frozen=True)
class B0Result:
    closure: Subspace
    b0_dim: int
    b0_order: int


@dataclass(frozen=True, eq=False)
class GroupParameters:
    """``(p, d, L)`` with ``L`` a subspace of ``Lambda^2 F_p^d``; ``r = dim L``."""

    p: int
    d: int
    L: Subspace

    def __post_init__(self):
        if self.L.field != Field.prime(self.p):
            raise ParameterError("L must be defined over F_p")
        if self.L.ambient != comb(self.d, 2):
            raise ParameterError(f"L must live in Lambda^2 of dimension {comb(self.d, 2)}")

    @classmethod
    def from_rows(cls, p, d, rows):
        N = comb(d, 2)
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, N)
        return cls(p, d, Subspace.from_rows(rows, Field.prime(p), N))

    @property
    def field(self) -> Field:
        return self.L.field

    @property
    def r(self) -> int:
        return self.L.dim

    @property
    def rho(self) -> int:
        return comb(self.d, 2) - self.r

    @property
    def order_exponent(self) -> int:
        return self.d + self.rho

    @cached_property
    def quotient_matrix(self) -> np.ndarray:
        """``N x rho`` matrix of the projection W -> W/L in free-column coordinates."""
        N = comb(self.d, 2)
        free = self.L.free_columns
        P = np.zeros((N, len(free)), dtype=np.int64)
        for s, j in enumerate(free):
            P[j, s] = 1
            for row, c in zip(self.L.basis, self.L.pivots):
                P[c, s] = -row[j]
        return P % self.p

    def project(self, w) -> np.ndarray:
        return (np.asarray(w, dtype=np.int64) @ self.quotient_matrix) % self.p


def bogomolov(params: GroupParameters, budget: int = CLOSURE_BUDGET) -> B0Result:
    closure = decomposable_closure(params.L, params.d, budget)
    b0 = params.r - closure.dim
    return B0Result(closure, b0, params.p**b0)


# -- class-2 group model --------------------------------------------------


@dataclass(frozen=True)
class ClassTwoElement:
    """``(v, w)`` with ``v`` in F_p^d and ``w`` in W/L (free-column coordinates)."""

    v: tuple
    w: tuple


def _require_lazard(params: GroupParameters):
    if params.p <= 3:
        raise ParameterError("the class-2 group model needs p > 3")


def group_element(params: GroupParameters, v, w=None) -> ClassTwoElement:
    """Element with abelianization ``v``; ``w`` is given in W coordinates (length C(d, 2))."""
    _require_lazard(params)
    v = np.asarray(v, dtype=np.int64) % params.p
    if w is None:
        wq = np.zeros(params.rho, dtype=np.int64)
    else:
        wq = params.project(w)
    return ClassTwoElement(tuple(int(x) for x in v), tuple(int(x) for x in wq))


def group_identity(params: GroupParameters) -> ClassTwoElement:
    return ClassTwoElement((0,) * params.d, (0,) * params.rho)


def group_multiply(params: GroupParameters, g: ClassTwoElement, h: ClassTwoElement) -> ClassTwoElement:
    """``g h = (v_g + v_h, w_g + w_h + pi(v_g ^ v_h) / 2)``."""
    _require_lazard(params)
    p = params.p
    half = (p + 1) // 2
    vg = np.asarray(g.v, dtype=np.int64)
    vh = np.asarray(h.v, dtype=np.int64)
    br = params.project(wedge(vg, vh, params.field))
    w = (np.asarray(g.w, dtype=np.int64) + np.asarray(h.w, dtype=np.int64) + half * br) % p
    return ClassTwoElement(tuple(int(x) for x in (vg + vh) % p), tuple(int(x) for x in w))


def group_inverse(params: GroupParameters, g: ClassTwoElement) -> ClassTwoElement:
    p = params.p
    return ClassTwoElement(tuple((-x) % p for x in g.v), tuple((-x) % p for x in g.w))


def group_commutator(params: GroupParameters, g: ClassTwoElement, h: ClassTwoElement) -> ClassTwoElement:
    """``g h g^-1 h^-1``, evaluated through the group law."""
    m = group_multiply
    gh = m(params, g, h)
    return m(params, m(params, gh, group_inverse(params, g)), group_inverse(params, h))


def group_power(params: GroupParameters, g: ClassTwoElement, k: int) -> ClassTwoElement:
    _require_lazard(params)
    if k < 0:
        g, k = group_inverse(params, g), -k
    result = group_identity(params)
    base = g
    while k:
        if k & 1:
            result = group_multiply(params, result, base)
        base = group_multiply(params, base, base)
        k >>= 1
    return result


def group_generators(params: GroupParameters) -> list[ClassTwoElement]:
    gens = []
    for i in range(params.d):
        v = [0] * params.d
        v[i] = 1
        gens.append(ClassTwoElement(tuple(v), (0,) * params.rho))
    return gens


def generated_group_order(params: GroupParameters, limit: int = 5**6) -> int:
    """Size of the subgroup generated by the standard generators, by closure."""
    _require_lazard(params)
    if params.p**params.order_exponent > limit:
        raise BudgetExceeded(params.p**params.order_exponent, limit, "group enumeration")
    gens = group_generators(params)
    seen = {group_identity(params)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group_multiply(params, x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


# -- commutators and the Jacobi map ----------------------------------------


def commutator_coset_surjectivity(params: GroupParameters, budget: int = 10**7) -> bool:
    """True iff every element of [G_L, G_L] is a single commutator.

    Commutators are ``pi(u ^ v)``, so this asks whether the decomposable
    bivectors together with 0 meet every coset of ``W / L``.
    """
    p, rho = params.p, params.rho
    if p**rho > budget:
        raise BudgetExceeded(p**rho, budget, "coset enumeration")
    if rho == 0:
        return True
    planes = np.concatenate([B for _, B in iter_batches(2, params.d, p, 1 << 16)]) if params.d >= 2 else np.zeros((0, 2, params.d), np.int64)
    vols = wedge(planes[:, 0], planes[:, 1], params.field)
    img = params.project(vols)
    hit = np.zeros(p**rho, dtype=bool)
    hit[0] = True
    weights = p ** np.arange(rho - 1, -1, -1, dtype=np.int64)
    for c in range(1, p):
        hit[((c * img) % p) @ weights] = True
    return bool(hit.all())


def lie_algebra(params: GroupParameters):
    """Structure of ``V + W/L``: returns ``(n, bracket)`` with ``bracket[a, b]`` in F_p^n."""
    d, rho, p = params.d, params.rho, params.p
    n = d + rho
    br = np.zeros((n, n, n), dtype=np.int64)
    look = basis_index(d)
    for a, b in combinations(range(d), 2):
        e = np.zeros(comb(d, 2), dtype=np.int64)
        e[look.pair(a, b)] = 1
        q = params.project(e)
        br[a, b, d:] = q
        br[b, a, d:] = (-q) % p
    return n, br


def jacobi_absorption_check(params: GroupParameters, max_dim: int = 8, budget: int = CLOSURE_BUDGET) -> bool:
    """Check ``im theta <= span(D & ker kappa)`` inside Lambda^2 of the Lie algebra.

    ``theta(x ^ y ^ z) = [x, y] ^ z + [y, z] ^ x + [z, x] ^ y`` and ``kappa`` is
    the bracket ``Lambda^2 -> algebra``. Candidate decomposables ``b_a ^ b_b``
    with vanishing bracket are verified (square zero, in the kernel); if they
    do not absorb the image, the exact closure of ``ker kappa`` decides.
    """
    n, br = lie_algebra(params)
    if n > max_dim:
        raise BudgetExceeded(n, max_dim, "Lie algebra dimension")
    p, F = params.p, params.field
    look = basis_index(n)
    N2 = comb(n, 2)
    kappa = np.zeros((N2, n), dtype=np.int64)
    for idx, (a, b) in enumerate(look.pairs):
        kappa[idx] = br[a, b]
    eye = np.eye(n, dtype=np.int64)

    def wedge_vec(x, y):
        return wedge(x, y, F) if n >= 2 else np.zeros(0, np.int64)

    theta = []
    for x, y, z in combinations(range(n), 3):
        t = (
            wedge_vec(br[x, y], eye[z])
            + wedge_vec(br[y, z], eye[x])
            + wedge_vec(br[z, x], eye[y])
        ) % p
        theta.append(t)
    theta = np.array(theta, dtype=np.int64).reshape(-1, N2)
    if not theta.any():
        return True
    cands = []
    for idx, (a, b) in enumerate(look.pairs):
        if not kappa[idx].any():
            c = np.zeros(N2, dtype=np.int64)
            c[idx] = 1
            cands.append(c)
    cands = np.array(cands, dtype=np.int64).reshape(-1, N2)
    if len(cands):
        assert not (cands @ kappa % p).any()
        assert not wedge_square(cands, F, n).any()
        S = Subspace.from_rows(cands, F, N2)
        if all(S.contains(t) for t in theta):
            return True
    ker = kernel_basis(kappa.T, F)
    closure = decomposable_closure(ker, n, budget)
    return all(closure.contains(t) for t in theta)


# -- the torsion example over Z_p ------------------------------------------


@dataclass(frozen=True)
class TorsionWitness:
    p: int
    generators: tuple
    quadric: tuple  # (A, B, C) with q(a, b) = A a^2 + B ab + C b^2
    directions: tuple
    divisors: tuple
    sk1_order: int
    sk1_trivial_over_Qp: bool
    notes: list = dc_field(default_factory=list)


def _binary_quadric_roots(A: int, B: int, C: int) -> list[tuple[int, int]]:
    """Primitive integer directions ``(a, b)`` of the rational zeros of ``A a^2 + B ab + C b^2``."""
    roots = []

    def prim(a, b):
        a, b = Fraction(a), Fraction(b)
        den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        a, b = int(a * den), int(b * den)
        g = gcd(a, b)
        a, b = a // g, b // g
        if a < 0 or (a == 0 and b < 0):
            a, b = -a, -b
        return a, b

    if A == 0 and B == 0 and C == 0:
        raise ParameterError("quadric vanishes identically")
    if A == 0:
        roots.append(prim(1, 0))
        # b (B a + C b) = 0
        if C != 0:
            roots.append(prim(C, -B))
    else:
        disc = B * B - 4 * A * C
        s = isqrt(disc) if disc >= 0 else -1
        if s >= 0 and s * s == disc:
            # a / b = (-B +- s) / (2A)
            for sg in (1, -1):
                roots.append(prim(Fraction(-B + sg * s, 2 * A), 1))
    return sorted(set(roots))


def torsion_witness_d4(p: int) -> TorsionWitness:
    """SK1 of the Z_p-lattice ``L = <e1^e2, e3^e2 + e1^e4 + p e3^e4>``.

    Over Q the decomposables of L span it; over Z_p they span the sublattice
    with basis ``(1, 0), (1, p)``, of index p.
    """
    from .linalg import is_prime

    if p <= 2 or not is_prime(p):
        raise ParameterError("p must be an odd prime")
    Q = Field.rational()
    e = np.eye(4, dtype=np.int64)
    g1 = wedge(e[0], e[1], Q)
    g2 = wedge(e[2], e[1], Q) + wedge(e[0], e[3], Q) + p * wedge(e[2], e[3], Q)
    form = quadric_system(np.vstack([g1, g2]), Q, 4)[0]
    A, B, C = int(form[0, 0]), int(2 * form[0, 1]), int(form[1, 1])
    dirs = _binary_quadric_roots(A, B, C)
    # each direction must give a decomposable vector of L
    for a, b in dirs:
        w = a * g1 + b * g2
        assert not wedge_square(w, Q, 4).any()
    rational_rank = rank(np.array(dirs, dtype=object), Q)
    divisors = smith_normal_form(dirs)
    nonzero = [x for x in divisors if x]
    order = 1
    for x in nonzero:
        order *= x
    full = len(nonzero) == 2
    notes = [
        f"(e1 + {p} e3) ^ (e2 + {p} e4) = g1 + {p} g2: "
        + str(not (wedge(e[0] + p * e[2], e[1] + p * e[3], Q) - (g1 + p * g2)).any())
    ]
    return TorsionWitness(
        p=p,
        generators=(tuple(int(x) for x in g1), tuple(int(x) for x in g2)),
        quadric=(A, B, C),
        directions=tuple(dirs),
        divisors=tuple(divisors),
        sk1_order=order if full else 0,
        sk1_trivial_over_Qp=rational_rank == 2,
        notes=notes,
    )
