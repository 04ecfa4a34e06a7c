"""Coordinates on Lambda^2 V and Lambda^4 V and the decomposability test.

Basis conventions: ``e_i ^ e_j`` (i < j) and ``e_i ^ e_j ^ e_k ^ e_l``
(i < j < k < l) are ordered lexicographically, indices 0-based. With these
signs the square of a bivector is

    (w ^ w)_{ijkl} = 2 (w_ij w_kl - w_ik w_jl + w_il w_jk).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from itertools import combinations
from math import isqrt

import numpy as np

from .errors import NotDecomposable, ParameterError
from .linalg import Field, Subspace


@dataclass(frozen=True)
class WedgeBasisIndex:
    """Lexicographic bijections for pairs and quadruples of ``range(d)``."""

    d: int
    pairs: tuple
    quads: tuple

    @property
    def dim2(self) -> int:
        return len(self.pairs)

    @property
    def dim4(self) -> int:
        return len(self.quads)

    def pair(self, i: int, j: int) -> int:
        """Index of ``e_i ^ e_j`` for ``i < j``."""
        return _pair_lookup(self.d)[i, j]

    @property
    def pair_i(self) -> np.ndarray:
        return _pair_arrays(self.d)[0]

    @property
    def pair_j(self) -> np.ndarray:
        return _pair_arrays(self.d)[1]

    def quad_terms(self):
        """Index arrays (ij, kl, ik, jl, il, jk) into the pair basis, one entry per quad."""
        return _quad_terms(self.d)


@cache
def basis_index(d: int) -> WedgeBasisIndex:
    if d < 0:
        raise ParameterError("dimension must be nonnegative")
    return WedgeBasisIndex(d, tuple(combinations(range(d), 2)), tuple(combinations(range(d), 4)))


@cache
def _pair_lookup(d):
    table = -np.ones((d, d), dtype=np.int64)
    for idx, (i, j) in enumerate(combinations(range(d), 2)):
        table[i, j] = idx
    return table


@cache
def _pair_arrays(d):
    pairs = list(combinations(range(d), 2))
    pi = np.array([a for a, _ in pairs], dtype=np.int64)
    pj = np.array([b for _, b in pairs], dtype=np.int64)
    return pi, pj


@cache
def _quad_terms(d):
    look = _pair_lookup(d)
    quads = list(combinations(range(d), 4))
    cols = [[], [], [], [], [], []]
    for i, j, k, l in quads:
        for c, (a, b) in zip(cols, ((i, j), (k, l), (i, k), (j, l), (i, l), (j, k))):
            c.append(look[a, b])
    return tuple(np.array(c, dtype=np.int64) for c in cols)


def _dim_from_len(n: int) -> int:
    d = (1 + isqrt(1 + 8 * n)) // 2
    if d * (d - 1) // 2 != n:
        raise ParameterError(f"length {n} is not a binomial C(d, 2)")
    return d


def wedge(u, v, field: Field) -> np.ndarray:
    """Coordinates of ``u ^ v``: ``(u ^ v)_{ij} = u_i v_j - u_j v_i``."""
    u = field.array(u)
    v = field.array(v)
    if u.shape != v.shape:
        raise ParameterError("wedge factors must have the same length")
    pi, pj = _pair_arrays(u.shape[-1])
    return field.reduce(u[..., pi] * v[..., pj] - u[..., pj] * v[..., pi])


def wedge_square(w, field: Field, d: int | None = None) -> np.ndarray:
    """Coordinates of ``w ^ w`` in the quadruple basis (works on stacked rows)."""
    w = field.array(w)
    if d is None:
        d = _dim_from_len(w.shape[-1])
    ij, kl, ik, jl, il, jk = _quad_terms(d)
    if len(ij) == 0:
        return field.zeros(w.shape[:-1] + (0,))
    out = 2 * (w[..., ij] * w[..., kl] - w[..., ik] * w[..., jl] + w[..., il] * w[..., jk])
    return field.reduce(out)


def wedge_product(w1, w2, field: Field, d: int | None = None) -> np.ndarray:
    """Coordinates of ``w1 ^ w2`` for bivectors (symmetric in its arguments)."""
    w1 = field.array(w1)
    w2 = field.array(w2)
    if d is None:
        d = _dim_from_len(w1.shape[-1])
    ij, kl, ik, jl, il, jk = _quad_terms(d)
    out = (
        w1[..., ij] * w2[..., kl]
        + w1[..., kl] * w2[..., ij]
        - w1[..., ik] * w2[..., jl]
        - w1[..., jl] * w2[..., ik]
        + w1[..., il] * w2[..., jk]
        + w1[..., jk] * w2[..., il]
    )
    return field.reduce(out)


def alternating_matrix(w, field: Field) -> np.ndarray:
    w = field.array(w)
    d = _dim_from_len(w.shape[-1])
    A = field.zeros((d, d))
    pi, pj = _pair_arrays(d)
    A[pi, pj] = w
    A[pj, pi] = field.reduce(-w)
    return A


def is_decomposable(w, field: Field) -> bool:
    """True iff ``w`` is a nonzero ``u ^ v``. The zero vector is not decomposable."""
    w = field.array(w)
    if field.is_zero(w):
        return False
    return field.is_zero(wedge_square(w, field))


def decompose(w, field: Field):
    """Factors ``(u, v)`` with ``wedge(u, v) == w``.

    Uses the alternating matrix ``A`` of ``w``: if ``a = A[i, j]`` is the first
    nonzero entry then ``w = (A[:, i] / a) ^ A[:, j]``.
    """
    w = field.array(w)
    if not is_decomposable(w, field):
        raise NotDecomposable("bivector is zero or has nonzero square")
    A = alternating_matrix(w, field)
    d = A.shape[0]
    pi, pj = _pair_arrays(d)
    k = next(t for t in range(w.shape[0]) if w[t] != 0)
    i, j = int(pi[k]), int(pj[k])
    u = field.reduce(A[:, i] * field.inv(w[k]))
    v = A[:, j].copy()
    return u, v


def quadric_system(basis, field: Field, d: int | None = None) -> np.ndarray:
    """Symmetric tables ``Q[q]`` with ``(sum_a c_a g_a)^2_q = c^T Q[q] c``.

    ``basis`` holds the generators ``g_a`` as rows; batched input of shape
    ``(m, r, N)`` gives ``(m, nq, r, r)``.
    """
    G = field.array(basis)
    if d is None:
        d = _dim_from_len(G.shape[-1])
    ij, kl, ik, jl, il, jk = _quad_terms(d)

    def outer(x, y):
        return G[..., :, None, x] * G[..., None, :, y]

    Q = (
        outer(ij, kl)
        + outer(kl, ij)
        - outer(ik, jl)
        - outer(jl, ik)
        + outer(il, jk)
        + outer(jk, il)
    )
    Q = np.moveaxis(Q, -1, -3)
    return field.reduce(Q)


def evaluate_quadrics(Q, coeffs, field: Field) -> np.ndarray:
    c = field.array(coeffs)
    if field.p is not None:
        return np.einsum("qab,a,b->q", Q, c, c) % field.p
    return np.array([c.dot(Qq.dot(c)) for Qq in Q], dtype=object)


def plane_volume(plane: Subspace) -> np.ndarray:
    """Plücker vector ``x ^ y`` of a 2-dim subspace with RREF basis ``x, y``."""
    if plane.dim != 2:
        raise ParameterError("expected a 2-dimensional subspace")
    return wedge(plane.basis[0], plane.basis[1], plane.field)


def plane_of(w, field: Field) -> Subspace:
    """The 2-plane whose volume form is the decomposable bivector ``w``."""
    u, v = decompose(w, field)
    return Subspace.from_rows(np.vstack([u, v]), field)
