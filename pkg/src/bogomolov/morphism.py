"""The decomposability map Psi: Gr(2, V)^r -> Gr(r, Lambda^2 V) and its differential.

``Psi(L_1, ..., L_r)`` is the span of the volume forms ``x_i ^ y_i``. Its
image is exactly the set of subspaces spanned by the decomposables they
contain, i.e. those with trivial Bogomolov multiplier.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

import numpy as np

from .core import closure_upper_bound, decomposable_closure
from .errors import IndeterminacyLocus, ParameterError
from .exterior import _dim_from_len, basis_index, quadric_system, wedge
from .grassmannian import gaussian_binomial, projective_points, sample_subspace
from .linalg import Field, Subspace, rank, subspace_sum


@dataclass(frozen=True)
class PlaneTuple:
    """An ordered tuple of 2-dimensional subspaces of ``field^d``."""

    planes: tuple
    d: int
    field: Field

    def __post_init__(self):
        for P in self.planes:
            if P.dim != 2 or P.ambient != self.d or P.field != self.field:
                raise ParameterError("every entry must be a 2-plane in the same space")

    @classmethod
    def from_bases(cls, bases, field: Field, d: int | None = None) -> PlaneTuple:
        planes = tuple(Subspace.from_rows(b, field, d) for b in bases)
        if d is None:
            if not planes:
                raise ParameterError("cannot infer d from an empty tuple")
            d = planes[0].ambient
        return cls(planes, d, field)

    @property
    def r(self) -> int:
        return len(self.planes)

    def volume_forms(self) -> np.ndarray:
        N = comb(self.d, 2)
        if not self.planes:
            return self.field.zeros((0, N))
        return np.vstack([wedge(P.basis[0], P.basis[1], self.field) for P in self.planes])


def psi(t: PlaneTuple) -> Subspace:
    forms = t.volume_forms()
    H = Subspace.from_rows(forms, t.field, comb(t.d, 2))
    if H.dim < t.r:
        raise IndeterminacyLocus(f"volume forms span dimension {H.dim} < {t.r}")
    return H


def in_image_of_psi(L: Subspace, d: int | None = None) -> bool:
    return decomposable_closure(L, d) == L


@dataclass(frozen=True)
class DifferentialReport:
    matrix: np.ndarray
    rank: int
    domain_dim: int
    codomain_dim: int
    is_submersion: bool
    is_immersion: bool
    condition_check: tuple

    @property
    def criteria_agree(self) -> bool:
        return self.is_submersion == all(self.condition_check)


def differential(t: PlaneTuple) -> DifferentialReport:
    """Matrix of ``dPsi`` at ``t`` and the submersion criterion ``Psi(L) + L_i ^ V = W``.

    Tangent spaces are ``hom(L_i, V/L_i)`` and ``hom(Psi(L), W/Psi(L))``, both
    in coordinates given by the non-pivot columns of the relevant RREF. A map
    ``A`` on ``L_i`` sends ``x_i ^ y_i`` to ``A x_i ^ y_i + x_i ^ A y_i``; the
    other volume forms stay fixed.
    """
    F, d, r = t.field, t.d, t.r
    H = psi(t)
    N = comb(d, 2)
    rho = N - r
    free_W = H.free_columns
    eye = F.eye(d)
    M = F.zeros((r * rho, 2 * r * (d - 2)))
    col = 0
    for i, P in enumerate(t.planes):
        x, y = P.basis
        for c in P.free_columns:
            for image in (wedge(eye[c], y, F), wedge(x, eye[c], F)):
                M[i * rho : (i + 1) * rho, col] = H.reduce(image)[free_W]
                col += 1
    rk = rank(M, F) if M.size else 0
    checks = []
    for P in t.planes:
        x, y = P.basis
        rows = [wedge(x, eye[k], F) for k in range(d)] + [wedge(y, eye[k], F) for k in range(d)]
        S = subspace_sum(H, Subspace.from_rows(np.vstack(rows), F, N))
        checks.append(S.dim == N)
    dom, cod = 2 * r * (d - 2), r * rho
    return DifferentialReport(M, rk, dom, cod, rk == cod, rk == dom, tuple(checks))


def canonical_submersion_tuple(d: int, lam=None, field: Field | None = None) -> PlaneTuple:
    """``L_1 = <e0, e1>`` and ``L_ij = <e0 + lam_ij e_i, e1 + lam_ij e_j>`` for ``2 <= i < j < d``.

    ``lam`` is a mapping from such pairs to scalars or a sequence in
    lexicographic pair order; it defaults to ``1, 2, 3, ...``. The values must be
    nonzero and pairwise distinct in ``field``.
    """
    if d < 4:
        raise ParameterError("need d >= 4")
    field = field or Field.rational()
    pairs = list(combinations(range(2, d), 2))
    if lam is None:
        values = list(range(1, len(pairs) + 1))
    elif isinstance(lam, dict):
        if set(lam) != set(pairs):
            raise ParameterError(f"lam must be keyed by the pairs {pairs}")
        values = [lam[q] for q in pairs]
    else:
        values = list(lam)
        if len(values) != len(pairs):
            raise ParameterError(f"need {len(pairs)} scalars")
    vals = field.array(np.array(values, dtype=object))
    if any(v == 0 for v in vals) or len(set(vals.tolist())) != len(vals):
        raise ParameterError("lam values must be nonzero and pairwise distinct")
    eye = field.eye(d)
    bases = [np.vstack([eye[0], eye[1]])]
    for (i, j), v in zip(pairs, vals):
        bases.append(field.reduce(np.vstack([eye[0] + v * eye[i], eye[1] + v * eye[j]])))
    return PlaneTuple.from_bases(bases, field, d)


def coordinate_plane_tuple(d: int, r: int, field: Field | None = None) -> PlaneTuple:
    """Pairwise disjoint coordinate planes ``<e_0, e_1>, <e_2, e_3>, ...``."""
    field = field or Field.rational()
    if not 0 <= r <= d // 2:
        raise ParameterError(f"at most {d // 2} disjoint coordinate planes fit in dimension {d}")
    eye = field.eye(d)
    return PlaneTuple.from_bases([np.vstack([eye[2 * i], eye[2 * i + 1]]) for i in range(r)], field, d)


def random_plane_tuple(d: int, r: int, p: int, rng) -> PlaneTuple:
    F = Field.prime(p)
    return PlaneTuple(tuple(sample_subspace(2, d, p, rng) for _ in range(r)), d, F)


def random_rational_tuple(d: int, r: int, rng, bound: int = 5) -> PlaneTuple:
    F = Field.rational()
    planes = []
    while len(planes) < r:
        M = rng.integers(-bound, bound + 1, size=(2, d))
        P = Subspace.from_rows(M.astype(object), F, d)
        if P.dim == 2:
            planes.append(P)
    return PlaneTuple(tuple(planes), d, F)


# -- fibres -------------------------------------------------------------------


def decomposable_points(L: Subspace, d: int | None = None) -> np.ndarray:
    """Normalized representatives of the decomposable lines of ``L`` (over F_p)."""
    F = L.field
    if L.dim == 0:
        return F.zeros((0, L.ambient))
    if d is None:
        d = _dim_from_len(L.ambient)
    pts = projective_points(L.dim, F.p)
    if d < 4:
        vecs = F.matmul(pts, L.basis)
    else:
        Q = quadric_system(L.basis, F, d)
        vals = np.einsum("qab,ma,mb->mq", Q, pts, pts) % F.p
        vecs = F.matmul(pts[~vals.any(axis=1)], L.basis)
    return vecs


def psi_fibre_size(L: Subspace, d: int | None = None) -> int:
    """Number of ordered plane tuples ``t`` with ``psi(t) == L``.

    Planes correspond to decomposable lines, so this counts ordered bases of
    ``L`` made of decomposable lines.
    """
    r = L.dim
    pts = decomposable_points(L, d)
    count = 0
    for combo in combinations(range(len(pts)), r):
        if rank(pts[list(combo)], L.field) == r:
            count += 1
    return count * factorial(r)


# -- subspaces outside the image ---------------------------------------------


def block_pattern(field: Field, d: int, block: int) -> np.ndarray:
    """Rows ``v1^v2 - v3^v4, v1^v3, v1^v4`` on coordinates ``4*block .. 4*block+3``."""
    look = basis_index(d)
    a = 4 * block
    rows = field.zeros((3, comb(d, 2)))
    rows[0, look.pair(a, a + 1)] = 1
    rows[0, look.pair(a + 2, a + 3)] = -1
    rows[1, look.pair(a, a + 2)] = 1
    rows[2, look.pair(a, a + 3)] = 1
    return field.reduce(rows)


def block_columns(d: int, n_blocks: int) -> list[int]:
    look = basis_index(d)
    cols = set()
    for b in range(n_blocks):
        for i, j in combinations(range(4 * b, 4 * b + 4), 2):
            cols.add(look.pair(i, j))
    return sorted(cols)


def complement_columns(d: int, n_blocks: int) -> list[int]:
    """Coordinates of the standard complement ``U`` of the block wedges."""
    used = set(block_columns(d, n_blocks))
    return [c for c in range(comb(d, 2)) if c not in used]


@dataclass(frozen=True)
class ConstructionInfo:
    d: int
    r: int
    N: int
    rho: int
    lemma_hypotheses_hold: bool
    complement_dim: int
    distinct_members: int
    lemma_bound: int | Fraction


def construction_info(d: int, r: int, N: int, p: int) -> ConstructionInfo:
    rho = comb(d, 2) - r
    _check_feasible(d, r, N)
    u = comb(d, 2) - 6 * N
    e = (r - 3 * N) * (rho - 3 * N - 1)
    bound = p**e if e >= 0 else Fraction(1, p**-e)
    return ConstructionInfo(
        d, r, N, rho,
        lemma_hypotheses_hold=d > 4 * N and r > 3 * N and rho > 3 * N + 1,
        complement_dim=u,
        distinct_members=gaussian_binomial(u, r - 3 * N, p).value,
        lemma_bound=bound,
    )


def _check_feasible(d, r, N):
    if N < 1:
        raise ParameterError("N must be at least 1")
    rho = comb(d, 2) - r
    if d < 4 * N or r < 3 * N or rho < 3 * N or r > comb(d, 2):
        raise ParameterError(f"infeasible: need d >= {4 * N}, {3 * N} <= r <= C(d,2) - {3 * N}")


def construct_nondecomposable(d: int, r: int, N: int, L_choice: Subspace, strict: bool = True) -> Subspace:
    """``X_1 + ... + X_N + L_choice`` with ``X_i`` the codimension-3 block pattern.

    ``L_choice`` is a subspace of ``U`` of dimension ``r - 3N``, given in
    ``U``-coordinates (length ``dim U``) or in full Lambda^2 coordinates. Each
    block contributes one dimension to the Bogomolov multiplier. With
    ``strict`` the inequalities ``d > 4N``, ``r > 3N``, ``rho > 3N + 1`` are
    enforced; otherwise only what the construction itself needs.
    """
    F = L_choice.field
    NW = comb(d, 2)
    rho = NW - r
    if strict and not (d > 4 * N and r > 3 * N and rho > 3 * N + 1):
        raise ParameterError(f"need d > {4 * N}, r > {3 * N}, rho > {3 * N + 1}")
    _check_feasible(d, r, N)
    ucols = complement_columns(d, N)
    if L_choice.dim != r - 3 * N:
        raise ParameterError(f"L_choice must have dimension {r - 3 * N}")
    if L_choice.ambient == len(ucols):
        lifted = F.zeros((L_choice.dim, NW))
        lifted[:, ucols] = L_choice.basis
    elif L_choice.ambient == NW:
        lifted = L_choice.basis
        if not F.is_zero(lifted[:, block_columns(d, N)]):
            raise ParameterError("L_choice must lie in the standard complement U")
    else:
        raise ParameterError("L_choice has the wrong ambient dimension")
    rows = [block_pattern(F, d, b) for b in range(N)] + [lifted]
    out = Subspace.from_rows(np.vstack(rows), F, NW)
    assert out.dim == r
    return out


def random_construction(d: int, r: int, N: int, p: int, rng, strict: bool = True) -> Subspace:
    u = comb(d, 2) - 6 * N
    choice = sample_subspace(r - 3 * N, u, p, rng)
    return construct_nondecomposable(d, r, N, choice, strict=strict)


def block_certificate(S: Subspace, d: int, n_blocks: int) -> Subspace:
    """Upper bound for the decomposable closure from the 4-blocks of the construction."""
    blocks = [range(4 * b, 4 * b + 4) for b in range(n_blocks)]
    return closure_upper_bound(S, blocks, d)


def construct_nondecomposable_rational(d: int, r: int, L_choice: Subspace, k, field: Field | None = None) -> Subspace:
    """``<x + k_0, l_1 + k_1, ..., l_{r-1} + k_{r-1}>`` with ``x = v1^v2 + v3^v4``.

    ``L_choice`` (dimension ``r - 1``, full coordinates) lies in the complement
    ``U`` of ``Lambda^2 <v1..v4>``; ``k`` is an ``r x dim K`` coefficient
    matrix on the free-column complement ``K`` of ``L_choice`` inside ``U``.
    Needs ``C(d, 2) - r >= 5``.
    """
    field = field or L_choice.field
    NW = comb(d, 2)
    if d < 4 or NW - r < 5 or r < 1:
        raise ParameterError("need d >= 4, r >= 1 and C(d,2) - r >= 5")
    ucols = complement_columns(d, 1)
    if L_choice.dim != r - 1 or L_choice.ambient != NW:
        raise ParameterError(f"L_choice must be an ({r - 1})-dim subspace of Lambda^2")
    if not field.is_zero(L_choice.basis[:, block_columns(d, 1)]):
        raise ParameterError("L_choice must lie in U")
    piv = set(L_choice.pivots)
    kcols = [c for c in ucols if c not in piv]
    k = field.array(k)
    if k.shape != (r, len(kcols)):
        raise ParameterError(f"k must have shape {(r, len(kcols))}")
    look = basis_index(d)
    x = field.zeros(NW)
    x[look.pair(0, 1)] = 1
    x[look.pair(2, 3)] = 1
    K = field.zeros((r, NW))
    K[:, kcols] = k
    rows = np.vstack([x[None] + K[:1], L_choice.basis + K[1:]]) if r > 1 else x[None] + K[:1]
    out = Subspace.from_rows(field.reduce(rows), field, NW)
    assert out.dim == r
    return out


def rational_certificate(S: Subspace, d: int) -> Subspace:
    """Upper bound for the closure of ``S``: decomposables project to 0 on the first 4-block."""
    return closure_upper_bound(S, [range(4)], d)


def sample_rational_construction(d: int, r: int, rng, bound: int = 3) -> Subspace:
    F = Field.rational()
    NW = comb(d, 2)
    ucols = complement_columns(d, 1)
    while True:
        M = F.zeros((r - 1, NW))
        M[:, ucols] = rng.integers(-bound, bound + 1, size=(r - 1, len(ucols))).astype(object)
        L = Subspace.from_rows(M, F, NW) if r > 1 else Subspace.zero(F, NW)
        if L.dim == r - 1:
            break
    nk = len(ucols) - (r - 1)
    k = rng.integers(-bound, bound + 1, size=(r, nk)).astype(object)
    return construct_nondecomposable_rational(d, r, L, k, F)
