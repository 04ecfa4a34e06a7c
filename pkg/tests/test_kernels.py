import numpy as np
import pytest

from bogomolov import kernels
from bogomolov.core import annihilators
from bogomolov.exterior import basis_index, quadric_system
from bogomolov.grassmannian import (
    projective_points,
    rank_table,
    sample_rref_batch,
    sparse_first_points,
)
from bogomolov.linalg import Field
from bogomolov.orbits import gl_generators, wedge_square_matrix

pytestmark = pytest.mark.skipif(len(kernels.available()) < 2, reason="numba not installed")


def both(fn, *args):
    out = []
    for name in ("numpy", "numba"):
        with kernels.use_backend(name):
            out.append(fn(*args))
    return out


def test_env_flag_names_backend():
    assert kernels.ENV_FLAG == "BOGOMOLOV_DISABLE_NUMBA"
    assert kernels.backend_name() in kernels.available()
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def test_rref_batch_agrees(rng):
    for p in (3, 7, 101):
        A = rng.integers(0, p, size=(200, 4, 7))
        A[::5, 3] = (A[::5, 0] + 2 * A[::5, 1]) % p
        (R1, k1), (R2, k2) = both(kernels.rref_batch, A, p)
        assert (R1 == R2).all() and (k1 == k2).all()


@pytest.mark.parametrize("p,d,r", [(3, 4, 3), (5, 4, 2), (3, 5, 4)])
def test_closures_agree(p, d, r, rng):
    F = Field.prime(p)
    B = sample_rref_batch(r, d * (d - 1) // 2, p, 150, rng)
    Q = quadric_system(B, F, d)
    pts = projective_points(r, p)
    (d1, s1), (d2, s2) = both(kernels.point_closure, Q, pts, p)
    assert (d1 == d2).all() and (s1 == s2).all()
    idx = basis_index(d)
    ann = annihilators(B, p)
    (e1, t1), (e2, t2) = both(kernels.pencil_closure, ann, idx.pair_i, idx.pair_j, d, sparse_first_points(d, p), p)
    assert (e1 == e2).all() and (t1 == t2).all()
    # the two scans compute the same dimension
    assert (e1 == d1).all()


def test_rank_unrank_agree(rng):
    tab = rank_table(2, 6, 5)
    idx = rng.integers(0, tab.total, size=500)
    U1, U2 = both(kernels.unrank_batch, idx, 5, tab)
    assert (U1 == U2).all()
    r1, r2 = both(kernels.rank_rref, U1, 5, tab)
    assert (r1 == idx).all() and (r2 == idx).all()


def test_orbit_bfs_agrees():
    p, d = 3, 4
    tab = rank_table(2, 6, p)
    gens = np.stack([wedge_square_matrix(g, p) for g in gl_generators(d, p)])
    seed = tab.rank(np.array([[[1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1]]]))
    o1, o2 = both(kernels.orbit_bfs, seed, gens, p, tab)
    assert (np.sort(o1) == np.sort(o2)).all()
