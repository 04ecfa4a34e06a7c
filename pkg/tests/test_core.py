
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import closure_brute

from bogomolov.core import (
    GroupParameters,
    bogomolov,
    closure_strategy,
    closure_upper_bound,
    commutator_coset_surjectivity,
    decomposable_closure,
    generated_group_order,
    group_commutator,
    group_element,
    group_generators,
    group_identity,
    group_multiply,
    group_power,
    jacobi_absorption_check,
    torsion_witness_d4,
)
from bogomolov.errors import BudgetExceeded, ParameterError
from bogomolov.exterior import wedge
from bogomolov.grassmannian import sample_subspace
from bogomolov.linalg import Field, Subspace
from bogomolov.orbits import act

F5 = Field.prime(5)


def e(i, d=4):
    v = np.zeros(d, dtype=np.int64)
    v[i] = 1
    return v


def W(a, b, F, d=4):
    return wedge(e(a, d), e(b, d), F)


def B_space(F):
    return Subspace.from_rows([W(0, 1, F) - W(2, 3, F), W(0, 2, F), W(0, 3, F)], F, 6)


def random_gl(d, p, rng):
    while True:
        g = rng.integers(0, p, size=(d, d))
        if round(np.linalg.det(g)) % p:
            return g


def test_closure_examples():
    for p in (3, 5, 7):
        F = Field.prime(p)
        L = Subspace.from_rows([W(0, 1, F) + W(2, 3, F)], F, 6)
        assert decomposable_closure(L).dim == 0
        L = Subspace.from_rows([W(0, 1, F), W(0, 2, F)], F, 6)
        assert decomposable_closure(L) == L
    C = decomposable_closure(B_space(F5))
    assert C == Subspace.from_rows([W(0, 2, F5), W(0, 3, F5)], F5, 6)


def test_bogomolov_examples():
    res = bogomolov(GroupParameters(5, 4, B_space(F5)))
    assert (res.b0_dim, res.b0_order) == (1, 5)
    assert bogomolov(GroupParameters(5, 4, Subspace.zero(F5, 6))).b0_dim == 0
    assert bogomolov(GroupParameters(5, 4, Subspace.full(F5, 6))).b0_dim == 0


def test_parameter_validation():
    with pytest.raises(ParameterError):
        GroupParameters(5, 4, Subspace.zero(F5, 5))
    with pytest.raises(ParameterError):
        GroupParameters(5, 4, Subspace.zero(Field.prime(7), 6))
    with pytest.raises(ParameterError):
        decomposable_closure(Subspace.zero(Field.rational(), 6))


def test_strategy_choice():
    assert closure_strategy(0, 5, 3) == "trivial"
    assert closure_strategy(2, 3, 3) == "trivial"
    assert closure_strategy(3, 4, 3) == "points"
    assert closure_strategy(9, 6, 3) == "pencil"
    with pytest.raises(BudgetExceeded):
        closure_strategy(20, 9, 11, budget=100)


@pytest.mark.parametrize("p,d", [(3, 4), (3, 5), (5, 4)])
@pytest.mark.parametrize("strategy", ["points", "pencil"])
def test_closure_against_brute_force(p, d, strategy, rng, backend):
    N = d * (d - 1) // 2
    for _ in range(25):
        r = int(rng.integers(1, 5))
        L = sample_subspace(r, N, p, rng)
        C = decomposable_closure(L, d, strategy=strategy)
        assert C.dim == closure_brute(L.basis, d, p)
        assert all(L.contains(x) for x in C.basis)


@pytest.mark.parametrize("p,d", [(3, 4), (5, 4), (3, 5), (5, 5)])
def test_closure_idempotent_and_equivariant(p, d, rng):
    N = d * (d - 1) // 2
    for _ in range(10):
        L = sample_subspace(int(rng.integers(2, N - 1)), N, p, rng)
        C = decomposable_closure(L, d)
        assert decomposable_closure(C, d) == C
        g = random_gl(d, p, rng)
        assert decomposable_closure(act(g, L), d) == act(g, C)


def test_upper_bound_certificate():
    F = Field.prime(3)
    d = 8
    look_rows = []
    for off in (0, 4):
        look_rows.append(W(off, off + 1, F, d) - W(off + 2, off + 3, F, d))
    L = Subspace.from_rows(look_rows, F, 28)
    U = closure_upper_bound(L, [range(4), range(4, 8)], d)
    assert U.dim == 0
    assert decomposable_closure(L, d).dim == 0


# -- group model --------------------------------------------------------------


def random_element(params, rng):
    p, d = params.p, params.d
    return group_element(params, rng.integers(0, p, d), rng.integers(0, p, d * (d - 1) // 2))


@pytest.fixture
def params4(rng):
    return GroupParameters(5, 4, sample_subspace(2, 6, 5, rng))


def test_heisenberg():
    params = GroupParameters(5, 2, Subspace.zero(F5, 1))
    g1, g2 = group_generators(params)
    c = group_commutator(params, g1, g2)
    assert c.v == (0, 0) and c.w == (1,)
    assert generated_group_order(params) == 125


def test_multiply_half_bracket():
    params = GroupParameters(5, 4, Subspace.zero(F5, 6))
    g1, g2 = group_generators(params)[:2]
    prod = group_multiply(params, g1, g2)
    assert prod.v == (1, 1, 0, 0)
    # 1/2 = 3 mod 5
    assert prod.w == (3, 0, 0, 0, 0, 0)


def test_group_laws(params4, rng):
    ident = group_identity(params4)
    for _ in range(300):
        g, h, k = (random_element(params4, rng) for _ in range(3))
        m = group_multiply
        assert m(params4, m(params4, g, h), k) == m(params4, g, m(params4, h, k))
        c = group_commutator(params4, g, h)
        assert c.v == (0,) * 4
        assert c.w == tuple(int(x) for x in params4.project(wedge(np.array(g.v), np.array(h.v), F5)))
        assert group_commutator(params4, c, k) == ident
    for _ in range(100):
        g = random_element(params4, rng)
        assert group_power(params4, g, 5) == ident
        assert group_multiply(params4, g, group_power(params4, g, -1)) == ident


def test_commutator_ignores_w(params4, rng):
    for _ in range(50):
        g, h = random_element(params4, rng), random_element(params4, rng)
        g2 = group_element(params4, g.v, rng.integers(0, 5, 6))
        assert group_commutator(params4, g, h) == group_commutator(params4, g2, h)


def test_lazard_range():
    params = GroupParameters(3, 4, Subspace.zero(Field.prime(3), 6))
    with pytest.raises(ParameterError):
        group_multiply(params, group_identity(params), group_identity(params))


@pytest.mark.parametrize("d,r", [(3, 0), (3, 2), (4, 4), (4, 5), (4, 6)])
def test_group_order_by_enumeration(d, r, rng):
    N = d * (d - 1) // 2
    params = GroupParameters(5, d, sample_subspace(r, N, 5, rng))
    assert generated_group_order(params) == 5 ** params.order_exponent


def test_coset_surjectivity_examples(rng):
    for p in (3, 5):
        F = Field.prime(p)
        assert commutator_coset_surjectivity(GroupParameters(p, 3, Subspace.zero(F, 3)))
    assert not commutator_coset_surjectivity(GroupParameters(3, 4, Subspace.zero(Field.prime(3), 6)))
    for p in (3, 5):
        for r in (3, 4, 5, 6):
            for _ in range(5):
                params = GroupParameters(p, 4, sample_subspace(r, 6, p, rng))
                assert commutator_coset_surjectivity(params)


def test_jacobi_examples(rng):
    for d, r in [(3, 2), (4, 4), (3, 3), (4, 6)]:
        N = d * (d - 1) // 2
        assert jacobi_absorption_check(GroupParameters(5, d, sample_subspace(r, N, 5, rng)))
    with pytest.raises(BudgetExceeded):
        jacobi_absorption_check(GroupParameters(5, 4, Subspace.zero(F5, 6)), max_dim=8)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_torsion_witness(p):
    w = torsion_witness_d4(p)
    assert w.quadric == (0, 2 * p, -2)
    assert w.directions == ((1, 0), (1, p))
    assert w.divisors == (1, p)
    assert (w.sk1_order, w.sk1_trivial_over_Qp) == (p, True)


def test_torsion_witness_rejects():
    with pytest.raises(ParameterError):
        torsion_witness_d4(9)


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_b0_is_orbit_invariant(seed):
    rng = np.random.default_rng(seed)
    L = sample_subspace(3, 6, 3, rng)
    g = random_gl(4, 3, rng)
    assert bogomolov(GroupParameters(3, 4, L)).b0_dim == bogomolov(GroupParameters(3, 4, act(g, L))).b0_dim
