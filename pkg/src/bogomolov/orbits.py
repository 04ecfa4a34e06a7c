"""GL(V)-orbits on Gr(k, Lambda^2 V) over F_p by breadth-first search on ranks."""

from __future__ import annotations

from math import comb

import numpy as np

from . import kernels
from .errors import BudgetExceeded, ParameterError
from .exterior import basis_index, wedge
from .grassmannian import rank_table
from .linalg import Field, Subspace

ORBIT_BUDGET = 10**8


def primitive_root(p: int) -> int:
    """Smallest generator of F_p^*."""
    phi = p - 1
    primes = [q for q in range(2, phi + 1) if phi % q == 0 and all(q % s for s in range(2, int(q**0.5) + 1))]
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in primes):
            return g
    return 1  # p = 2 is rejected elsewhere


def gl_generators(d: int, p: int) -> list[np.ndarray]:
    """Matrices generating GL(d, F_p): a scaling, a transvection and two permutations."""
    gens = []
    D = np.eye(d, dtype=np.int64)
    D[0, 0] = primitive_root(p)
    gens.append(D)
    if d >= 2:
        T = np.eye(d, dtype=np.int64)
        T[0, 1] = 1
        gens.append(T)
        gens.append(np.eye(d, dtype=np.int64)[[1, 0] + list(range(2, d))])
        gens.append(np.roll(np.eye(d, dtype=np.int64), 1, axis=0))
    return gens


def wedge_square_matrix(g, p: int) -> np.ndarray:
    """Matrix of ``Lambda^2 g`` on the pair basis (acts on column vectors)."""
    g = np.asarray(g, dtype=np.int64) % p
    d = g.shape[0]
    F = Field.prime(p)
    look = basis_index(d)
    M = np.zeros((comb(d, 2), comb(d, 2)), dtype=np.int64)
    for idx, (i, j) in enumerate(look.pairs):
        M[:, idx] = wedge(g[:, i], g[:, j], F)
    return M


def act(g, L: Subspace) -> Subspace:
    """``g . L`` for ``g`` in GL(V) acting on ``L <= Lambda^2 V``."""
    return L.apply(wedge_square_matrix(g, L.field.p))


def orbit_ranks(seeds, d: int, p: int, budget: int = ORBIT_BUDGET) -> np.ndarray:
    """Sorted global ranks of the union of the GL(d, F_p)-orbits of ``seeds``."""
    seeds = list(seeds)
    if not seeds:
        return np.zeros(0, dtype=np.int64)
    k = seeds[0].dim
    N = comb(d, 2)
    if any(S.dim != k or S.ambient != N for S in seeds):
        raise ParameterError("seeds must share dimension and ambient space")
    table = rank_table(k, N, p)
    if table.total > budget:
        raise BudgetExceeded(table.total, budget, "orbit search")
    gens = np.stack([wedge_square_matrix(g, p) for g in gl_generators(d, p)])
    idx = table.rank(np.stack([S.basis for S in seeds]))
    return kernels.orbit_bfs(idx, gens, p, table)
