from fractions import Fraction

import pytest
from oracles import closure_brute

from bogomolov.errors import BudgetExceeded, ParameterError
from bogomolov.experiments import (
    catalan,
    census,
    construction_check,
    count_complementary_pairs,
    loggeneric,
    loggeneric_params,
    low_codimension_sweep,
    paper_bound,
    sample_experiment,
    submersion_check,
    verify_d4,
)
from bogomolov.grassmannian import enumerate_subspaces
from bogomolov.linalg import Field


def test_census_examples(backend):
    rep = census(3, 4, 1)
    assert (rep.total, rep.in_image, rep.fraction) == (364, 130, Fraction(5, 14))
    rep = census(3, 4, 6)
    assert (rep.total, rep.in_image) == (1, 1)
    assert census(3, 4, 4).fraction == 1
    assert census(3, 4, 0).total == 1


def test_census_against_brute_force():
    rep = census(3, 4, 2)
    hist = {}
    for L in enumerate_subspaces(2, 6, 3):
        b0 = 2 - closure_brute(L.basis, 4, 3)
        hist[b0] = hist.get(b0, 0) + 1
    assert rep.b0_histogram == hist


def test_census_errors():
    with pytest.raises(ParameterError):
        census(3, 4, 7)
    with pytest.raises(ParameterError):
        census(4, 4, 1)
    with pytest.raises(ParameterError):
        census(3, 4, 1, mode="nope")
    with pytest.raises(BudgetExceeded):
        census(3, 5, 5, budget=1000)


@pytest.mark.parametrize("r", range(7))
def test_sampled_agrees_with_exhaustive(r):
    exact = census(3, 4, r).fraction
    rep = census(3, 4, r, mode="sampled", trials=4000, seed=r)
    sigma = (float(exact) * (1 - float(exact)) / 4000) ** 0.5
    assert abs(rep.in_image / rep.total - float(exact)) <= 4 * sigma + 1e-12


def test_sampled_reproducible():
    a = census(5, 5, 3, mode="sampled", trials=300, seed=7)
    b = census(5, 5, 3, mode="sampled", trials=300, seed=7)
    assert a.b0_histogram == b.b0_histogram


def test_complementary_pairs_formula():
    for p in (3, 5):
        assert count_complementary_pairs(p) == p**4 * (p * p + 1) * (p * p + p + 1)


def test_verify_d4_p3():
    checks = verify_d4(3, fibre_samples=20)
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    detail = {c.name: c.detail for c in checks}
    assert detail["r=2 |X|"]["count"] == 10530
    assert detail["r=3 complement = orbit(A) u orbit(B)"]["complement"] == 3380


def test_low_codimension_d5():
    out = low_codimension_sweep(5, 3, max_codim=1)
    assert out[1]["outside"] == 0 and out[1]["total"] == (3**10 - 1) // 2


def test_low_codimension_d4_finds_the_bad_codim3():
    out = low_codimension_sweep(4, 3, max_codim=3)
    assert [out[c]["outside"] for c in range(3)] == [0, 0, 0]
    assert out[3]["outside"] == 3380


def test_bounds():
    assert [catalan(m) for m in range(6)] == [1, 1, 2, 5, 14, 42]
    b = paper_bound(7, 7, 5)
    assert b["kind"] == "upper" and b["delta"] == 2 and b["value"] == Fraction(1, 7**10)
    b = paper_bound(11, 5, 4)
    assert b["kind"] == "lower_liminf" and b["value"] == Fraction(1, 625)
    assert paper_bound(3, 4, 1)["vacuous"]


def test_sample_experiment_d4():
    _, _, info = sample_experiment(5, 4, 1, 10**4, seed=3)
    assert info["exact"] == Fraction(26, 126)
    assert abs(info["z"]) < 3
    assert info["ci95"][0] <= float(info["exact"]) <= info["ci95"][1]


def test_loggeneric_examples():
    lp = loggeneric_params(3, 9, Fraction(2, 3))
    assert (lp.d, lp.r, lp.rho) == (6, 12, 3)
    with pytest.raises(ParameterError):
        loggeneric_params(3, 15, Fraction(1, 3))
    out = loggeneric(3, 12, Fraction(1, 2), trials=50)
    assert (out["params"].d, out["params"].r, out["params"].rho) == (6, 9, 6)
    assert out["lemma_bound"] == 3**12
    assert out["count_exponent"] == 15 * 6


def test_construction_check():
    out = construction_check(3, 6, 10, members=10)
    assert out["all_ok"] and out["count_ok"] and out["min_b0"] >= 1
    assert out["info"].lemma_bound == 3**7


def test_submersion_check_modes():
    out = submersion_check(5, Field.rational())
    assert out["ok"] and out["report"].rank == 24
    out = submersion_check(6, Field.prime(101), lam_seed=1, random_trials=5)
    assert out["ok"] and out["report"].rank == 56 and out["random"]["disagreements"] == 0
    out = submersion_check(4, Field.rational(), r=1)
    assert out["ok"] and out["report"].is_immersion and not out["report"].is_submersion
