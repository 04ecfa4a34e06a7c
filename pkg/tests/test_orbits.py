from itertools import product

import numpy as np
import pytest
from oracles import rank_mod_p

from bogomolov.errors import BudgetExceeded, ParameterError
from bogomolov.experiments import subspace_A, subspace_B
from bogomolov.grassmannian import rank_table
from bogomolov.linalg import Field, Subspace
from bogomolov.orbits import (
    act,
    gl_generators,
    orbit_ranks,
    primitive_root,
    wedge_square_matrix,
)


@pytest.mark.parametrize("p,root", [(3, 2), (5, 2), (7, 3), (11, 2), (13, 2), (101, 2)])
def test_primitive_root(p, root):
    assert primitive_root(p) == root
    assert len({pow(root, k, p) for k in range(p - 1)}) == p - 1


def test_wedge_square_is_multiplicative(rng):
    p, d = 5, 4
    g, h = (rng.integers(0, p, size=(d, d)) for _ in range(2))
    assert (wedge_square_matrix(g @ h % p, p) == wedge_square_matrix(g, p) @ wedge_square_matrix(h, p) % p).all()


def test_generators_invertible():
    for d in (3, 4, 5):
        for g in gl_generators(d, 5):
            assert rank_mod_p(g, 5) == d


def test_orbits_match_full_group_d3(backend):
    # every element of GL(3, 3), applied directly
    p, d = 3, 3
    F = Field.prime(p)
    group = [np.array(m).reshape(3, 3) for m in product(range(p), repeat=9)]
    group = [g for g in group if rank_mod_p(g, p) == 3]
    assert len(group) == 11232
    tab = rank_table(1, 3, p)
    seed = Subspace.from_rows([[1, 0, 0]], F, 3)
    direct = sorted({int(tab.rank(act(g, seed).basis[None])[0]) for g in group})
    assert list(orbit_ranks([seed], d, p)) == direct


def test_decomposable_lines_form_one_orbit(backend):
    p = 3
    F = Field.prime(p)
    e12 = Subspace.from_rows([[1, 0, 0, 0, 0, 0]], F, 6)
    x = Subspace.from_rows([[1, 0, 0, 0, 0, 1]], F, 6)
    assert orbit_ranks([e12], 4, p).size == 130
    assert orbit_ranks([x], 4, p).size == 364 - 130


def test_orbits_of_A_and_B_are_disjoint(backend):
    oa = orbit_ranks([subspace_A(3)], 4, 3)
    ob = orbit_ranks([subspace_B(3)], 4, 3)
    assert np.intersect1d(oa, ob).size == 0
    assert (oa.size, ob.size) == (2340, 1040)


def test_orbit_errors():
    F = Field.prime(3)
    with pytest.raises(ParameterError):
        orbit_ranks([Subspace.zero(F, 6), Subspace.from_rows([[1, 0, 0, 0, 0, 0]], F, 6)], 4, 3)
    with pytest.raises(BudgetExceeded):
        orbit_ranks([subspace_B(3)], 4, 3, budget=100)
    assert orbit_ranks([], 4, 3).size == 0
