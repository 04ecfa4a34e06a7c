from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import alt_rank, decomposable_lines, normalize, wedge_naive

from bogomolov.errors import NotDecomposable, ParameterError
from bogomolov.exterior import (
    alternating_matrix,
    basis_index,
    decompose,
    is_decomposable,
    quadric_system,
    wedge,
    wedge_product,
    wedge_square,
)
from bogomolov.grassmannian import projective_points
from bogomolov.linalg import Field, rank

F5, F7 = Field.prime(5), Field.prime(7)
Q = Field.rational()


def e(i, d=4):
    v = np.zeros(d, dtype=np.int64)
    v[i] = 1
    return v


def test_basis_index_lexicographic():
    idx = basis_index(5)
    assert idx.pairs[:4] == ((0, 1), (0, 2), (0, 3), (0, 4))
    assert [idx.pair(i, j) for i, j in idx.pairs] == list(range(10))
    assert idx.quads == ((0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 3, 4), (0, 2, 3, 4), (1, 2, 3, 4))


def test_wedge_examples():
    assert list(wedge(e(0), e(1), F5)) == [1, 0, 0, 0, 0, 0]
    # (e1 + e3) ^ e2 = e1^e2 - e2^e3
    assert list(wedge(e(0) + e(2), e(1), F5)) == [1, 0, 0, 4, 0, 0]
    with pytest.raises(ParameterError):
        wedge([1, 2], [1, 2, 3], F5)


@given(st.lists(st.integers(-9, 9), min_size=5, max_size=5), st.lists(st.integers(-9, 9), min_size=5, max_size=5))
def test_wedge_against_naive(u, v):
    assert (wedge(u, v, Q) == wedge_naive(u, v)).all()
    assert (wedge(u, u, Q) == 0).all()
    assert (wedge(u, v, Q) == -wedge(v, u, Q)).all()


def test_wedge_square_examples():
    w = wedge(e(0), e(1), Q) + wedge(e(2), e(3), Q)
    assert list(wedge_square(w, Q)) == [2]
    assert list(wedge_square(wedge(e(0), e(1), Q), Q)) == [0]
    # g2 = e3^e2 + e1^e4 + 5 e3^e4 squares to -2 e1^e2^e3^e4
    g2 = wedge(e(2), e(1), Q) + wedge(e(0), e(3), Q) + 5 * wedge(e(2), e(3), Q)
    assert list(wedge_square(g2, Q)) == [-2]
    assert wedge_square(np.zeros(3, dtype=int), Q).shape == (0,)


def test_wedge_square_matches_self_product(rng):
    for d in (4, 5, 6):
        w = rng.integers(0, 7, size=d * (d - 1) // 2)
        assert (wedge_square(w, F7) == wedge_product(w, w, F7)).all()


def test_is_decomposable_examples():
    assert not is_decomposable(wedge(e(0), e(1), F5) + wedge(e(2), e(3), F5), F5)
    assert is_decomposable(3 * wedge(e(0), e(2), F7), F7)
    assert not is_decomposable(np.zeros(6, dtype=int), F5)


def test_decomposable_line_count_d4_p3():
    F = Field.prime(3)
    pts = projective_points(6, 3)
    flags = [is_decomposable(w, F) for w in pts]
    assert sum(flags) == (3**2 + 1) * (3**2 + 3 + 1) == 130


@pytest.mark.parametrize("d", [4, 5])
def test_three_way_agreement_exhaustive(d):
    # every projective point at p = 3 against brute-force factorization and matrix rank
    p = 3
    F = Field.prime(p)
    lines = decomposable_lines(d, p)
    for w in projective_points(d * (d - 1) // 2, p):
        a = is_decomposable(w, F)
        assert a == (alt_rank(w, d, p) <= 2)
        assert a == (normalize(w, p) in lines)


@pytest.mark.parametrize("p,d", list(product([3, 5, 7], [4, 5, 6])))
def test_three_way_agreement_random(p, d, rng):
    F = Field.prime(p)
    N = d * (d - 1) // 2
    W = rng.integers(0, p, size=(10**4, N))
    # half of the samples are forced decomposable
    U = rng.integers(0, p, size=(5000, d))
    V = rng.integers(0, p, size=(5000, d))
    W[:5000] = wedge(U, V, F)
    sq = wedge_square(W, F).any(axis=1)
    for w, s in zip(W[:400], sq[:400]):
        assert (not s) == (alt_rank(w, d, p) <= 2)
    assert not sq[:5000].any()


def test_decompose_roundtrip_full_sweep():
    F = Field.prime(3)
    for w in projective_points(10, 3):
        if is_decomposable(w, F):
            u, v = decompose(w, F)
            assert (wedge(u, v, F) == w).all()
            assert rank(np.vstack([u, v]), F) == 2
        else:
            with pytest.raises(NotDecomposable):
                decompose(w, F)


def test_decompose_examples():
    u, v = decompose(wedge(e(0), e(1), F5), F5)
    assert (wedge(u, v, F5) == wedge(e(0), e(1), F5)).all()
    w = (2 * wedge(e(0), e(2), F5) + 2 * wedge(e(1), e(2), F5)) % 5
    u, v = decompose(w, F5)
    assert (wedge(u, v, F5) == w).all()
    with pytest.raises(NotDecomposable):
        decompose(wedge(e(0), e(1), F5) + wedge(e(2), e(3), F5), F5)


def test_alternating_matrix():
    w = wedge(e(0), e(1), Q)
    A = alternating_matrix(w, Q)
    assert A[0, 1] == 1 and A[1, 0] == -1


def test_quadric_examples():
    G = np.vstack([wedge(e(0), e(1), Q), wedge(e(2), e(3), Q)])
    Qf = quadric_system(G, Q)
    # a^T Q a = 2 a1 a2
    assert Qf.shape == (1, 2, 2)
    assert Qf[0, 0, 0] == 0 and Qf[0, 1, 1] == 0 and Qf[0, 0, 1] == 1
    assert not quadric_system(wedge(e(0), e(1), Q)[None], Q).any()
    p = 5
    g1 = wedge(e(0), e(1), Q)
    g2 = wedge(e(2), e(1), Q) + wedge(e(0), e(3), Q) + p * wedge(e(2), e(3), Q)
    Qf = quadric_system(np.vstack([g1, g2]), Q)[0]
    # 2 p a b - 2 b^2
    assert (Qf[0, 0], 2 * Qf[0, 1], Qf[1, 1]) == (0, 2 * p, -2)


@pytest.mark.parametrize("d", [4, 5, 6])
def test_quadric_consistency(d, rng):
    p = 7
    N = d * (d - 1) // 2
    G = rng.integers(0, p, size=(4, N))
    Qf = quadric_system(G, F7, d)
    for _ in range(1000 // 3):
        a = rng.integers(0, p, size=4)
        got = np.einsum("qij,i,j->q", Qf, a, a) % p
        assert (got == wedge_square(a @ G % p, F7, d)).all()
