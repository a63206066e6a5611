from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from badlie import ffield
from badlie.chevalley import chevalley_algebra
from badlie.linform import LinearForm, regular_form, standard_levi_form, zero_form
from badlie.meataxe import spin
from badlie.verma import (HighestWeightError, MAX_RANK, WeightError, build_baby_verma, check_brackets,
                          check_p_powers, linkage_components, verma_certificate, verma_composition_dims,
                          verma_hom_from_vector, verma_irreducible, weight_space_dims)
from conftest import verma
from oracles import brute_force_factors, brute_force_irreducible, pbw_weight_counts, sl2_verma


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_a1_matches_explicit_formulas(p):
    alg = chevalley_algebra("A1", p)
    for lam in range(p):
        for cf in (0, 1):
            chi = standard_levi_form(alg, [1] if cf else [])
            Z = build_baby_verma(alg, chi, (lam,))
            assert np.array_equal(Z.action.astype(np.int64), np.array(sl2_verma(p, lam, cf)))


def test_a1_p3_lambda1_ranks():
    Z = verma("A1", 3, (), (1,))
    alg = Z.alg
    assert ffield.rank(Z.A(alg.neg_index(0)), 3) == 2
    # e_{+alpha} f v = 1 * f^0 v, e_{+alpha} f^2 v = 2(1 - 2 + 1) f v = 0
    assert ffield.rank(Z.A(alg.pos_index(0)), 3) == 1


@pytest.mark.parametrize("name,p,dim", [("G2", 2, 64), ("A2", 3, 27), ("A1", 5, 5)])
def test_dimension(name, p, dim):
    alg = chevalley_algebra(name, p)
    lam = (0,) * alg.rank
    assert verma(name, p, None, lam).dim == dim


TOY = [("A1", 2), ("A1", 3), ("A2", 2), ("A2", 3)]


def _forms(alg):
    subsets = [()] + [tuple(s) for k in range(1, alg.rank + 1) for s in itertools.combinations(range(1, alg.rank + 1), k)]
    return subsets


@pytest.mark.parametrize("case", TOY + [("G2", 2)])
def test_relations_hold(case):
    alg = chevalley_algebra(*case)
    for levi in _forms(alg):
        for lam in itertools.product(range(alg.p), repeat=alg.rank):
            Z = verma(case[0], case[1], levi, lam)
            assert check_brackets(Z) == []
            assert check_p_powers(Z) == []


@pytest.mark.parametrize("case", TOY + [("G2", 2), ("G2", 3)])
def test_module_is_generated_by_highest_weight_vector(case):
    alg = chevalley_algebra(*case)
    lam = tuple(range(alg.rank))
    lam = tuple(c % alg.p for c in lam)
    Z = verma(case[0], case[1], None, lam)
    v = Z.highest_weight_vector()
    for k in range(alg.N):
        assert not (Z.A(alg.pos_index(k)) @ v % alg.p).any()
    for i in range(alg.rank):
        assert np.array_equal(Z.A(alg.h_index(i)) @ v % alg.p, lam[i] * v % alg.p)
    if Z.dim <= 64:
        assert len(spin(Z.as_module(), v[None, :])) == Z.dim


@pytest.mark.parametrize("case", TOY + [("G2", 2), ("G2", 3)])
def test_weight_spaces_match_pbw_count(case):
    alg = chevalley_algebra(*case)
    lam = (1,) * alg.rank
    Z = verma(case[0], case[1], None, lam)
    assert weight_space_dims(Z) == pbw_weight_counts(alg.system, lam, alg.p)


# brute-force oracle: every module of dimension <= 9 (A2 at p = 3 has dimension 27 and is excluded)
@pytest.mark.parametrize("case", [("A1", 2), ("A1", 3), ("A2", 2)])
def test_against_brute_force(case):
    alg = chevalley_algebra(*case)
    for levi in _forms(alg):
        for lam in itertools.product(range(alg.p), repeat=alg.rank):
            Z = verma(case[0], case[1], levi, lam)
            gens = Z.action.astype(np.int64).tolist()
            assert verma_composition_dims(Z) == brute_force_factors(gens, alg.p)
            assert verma_irreducible(Z).irreducible == brute_force_irreducible(gens, alg.p)


def test_a1_p3_examples():
    assert verma_irreducible(verma("A1", 3, (), (0,))).irreducible is False
    assert verma_irreducible(verma("A1", 3, (), (2,))).irreducible is True
    assert verma_composition_dims(verma("A1", 3, (), (0,))) == [1, 2]


def test_a2_p3_factor_dims_sum():
    for lam in [(0, 0), (1, 2), (2, 2)]:
        Z = verma("A2", 3, (), lam)
        assert sum(verma_composition_dims(Z)) == 27


def test_rejects_bad_input():
    alg = chevalley_algebra("G2", 3)
    with pytest.raises(WeightError):
        build_baby_verma(alg, regular_form(alg), (0,))
    v = alg.zero()
    v[alg.h_index(0)] = 1
    with pytest.raises(WeightError, match=r"lambda\(h_1\)\^p - lambda\(h_1\)"):
        build_baby_verma(alg, LinearForm(alg, v), (0, 0))
    w = alg.zero()
    w[alg.pos_index(0)] = 1
    with pytest.raises(WeightError):
        build_baby_verma(alg, LinearForm(alg, w), (0, 0))
    big = chevalley_algebra("A3", 2)
    assert big.rank > MAX_RANK
    with pytest.raises(ValueError):
        build_baby_verma(big, zero_form(big), (0, 0, 0))


def test_weight_is_read_mod_p():
    assert verma("A1", 3, (), (4,)).weight == (1,)
    alg = chevalley_algebra("A1", 3)
    assert build_baby_verma(alg, zero_form(alg), (-1,)).weight == (2,)


# ---------------------------------------------------------------------------
# G2, p = 2


@pytest.mark.parametrize("a", [0, 1])
def test_g2_p2_homomorphism(a):
    src = verma("G2", 2, None, (a, 0))
    tgt = verma("G2", 2, None, ((a - 1) % 2, 0))
    w = np.zeros(tgt.dim, dtype=np.int64)
    w[tgt.monomial_index([0, 0, 0, 1, 0, 0])] = 1  # e_{-2a-b} v
    hom = verma_hom_from_vector(src, tgt, w)
    assert hom.is_equivariant()
    assert hom.kernel_dim == 32 and hom.image_dim == 32


def test_g2_p2_factors():
    Z = verma("G2", 2, None, (0, 0))
    cert = verma_irreducible(Z)
    assert cert.irreducible is False
    assert verma_composition_dims(Z) == [32, 32]


def test_trivial_homomorphisms():
    Z = verma("G2", 2, None, (1, 0))
    ident = verma_hom_from_vector(Z, Z, Z.highest_weight_vector())
    assert ident.kernel_dim == 0 and np.array_equal(ident.matrix % 2, np.eye(64, dtype=np.int64))
    zero = verma_hom_from_vector(Z, Z, np.zeros(64, dtype=np.int64))
    assert zero.kernel_dim == 64


def test_homomorphism_conditions_are_checked():
    Z = verma("G2", 2, None, (0, 0))
    T = verma("G2", 2, None, (1, 0))
    w = np.zeros(64, dtype=np.int64)
    w[T.monomial_index([1, 0, 0, 0, 0, 0])] = 1  # f_a v is not killed by e_a
    with pytest.raises(HighestWeightError, match="does not kill"):
        verma_hom_from_vector(Z, T, w)
    with pytest.raises(HighestWeightError, match="eigenvector"):
        verma_hom_from_vector(verma("G2", 2, None, (0, 1)), T, T.highest_weight_vector())


# ---------------------------------------------------------------------------
# linkage


def test_linkage_a1_p3():
    alg = chevalley_algebra("A1", 3)
    res = linkage_components(alg, zero_form(alg))
    assert res.complete
    assert res.components == [[(0,), (1,)], [(2,)]]
    assert len(res.components) == res.orbit_count == 2


def test_linkage_a2_p2_within_partition_bound():
    alg = chevalley_algebra("A2", 2)
    res = linkage_components(alg, zero_form(alg))
    assert res.complete and 1 <= len(res.components) <= 4
    assert sorted(w for c in res.components for w in c) == list(itertools.product(range(2), repeat=2))


def test_linkage_budget_exhaustion_is_flagged():
    alg = chevalley_algebra("A1", 3)
    res = linkage_components(alg, zero_form(alg), budget=0)
    assert not res.complete


def test_certificate_json_fields():
    cert = verma_certificate(verma("A1", 3, (), (0,)), seed=4, factors=True)
    assert set(cert) == {"type", "p", "lambda", "chi", "dim", "irreducible", "seed", "factor_dims", "witness"}
    assert cert["factor_dims"] == [1, 2] and cert["irreducible"] is False and cert["seed"] == 4


@settings(max_examples=25)
@given(st.sampled_from([("A2", 2), ("A2", 3), ("A1", 5), ("A1", 7)]), st.data())
def test_relations_on_random_elements(case, data):
    name, p = case
    alg = chevalley_algebra(name, p)
    lam = tuple(data.draw(st.lists(st.integers(0, p - 1), min_size=alg.rank, max_size=alg.rank)))
    levi = tuple(data.draw(st.sampled_from(_forms(alg))))
    Z = verma(name, p, levi, lam)
    rng = np.random.default_rng(data.draw(st.integers(0, 2 ** 32 - 1)))
    x, y = rng.integers(0, p, (2, alg.dim))
    Ax, Ay = Z.act(x), Z.act(y)
    assert np.array_equal((Ax @ Ay - Ay @ Ax) % p, Z.act(alg.bracket(x, y)))
