from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from badlie.rootsystem import (CartanError, CartanDatum, add, build_root_system, load_labels, neg,
                               root_system, scale)

EXCEPTIONAL = ["G2", "F4", "E6", "E7", "E8"]
# number of positive roots and Weyl group orders of the exceptional types
N_POS = {"G2": 6, "F4": 24, "E6": 36, "E7": 63, "E8": 120}
WEYL = {"G2": 12, "F4": 1152, "E6": 51840, "E7": 2903040, "E8": 696729600}


@pytest.mark.parametrize("name", EXCEPTIONAL)
def test_counts_and_weyl_order(name):
    rs = root_system(name)
    assert rs.N == N_POS[name]
    assert len(rs.roots) == 2 * N_POS[name]
    assert rs.weyl_order == WEYL[name]


@pytest.mark.parametrize("name,n", [("A3", 6), ("B3", 9), ("C4", 16), ("D5", 20), ("A1", 1), ("A2", 3)])
def test_classical_counts(name, n):
    assert root_system(name).N == n


@pytest.mark.parametrize("name", ["E6", "E7", "E8", "F4", "G2"])
def test_highest_root_matches_labels(name):
    assert list(root_system(name).highest_root) == load_labels()["types"][name]["highest_root"]


def test_root_order_starts_with_simple_roots():
    for name in EXCEPTIONAL:
        rs = root_system(name)
        assert [rs.positive_roots[i] for i in range(rs.rank)] == [rs.simple_root(i) for i in range(rs.rank)]
        heights = [sum(r) for r in rs.positive_roots]
        assert heights == sorted(heights)


def test_g2_labelling():
    rs = root_system("G2")
    # alpha_1 short, alpha_2 long; the positive roots are a, b, a+b, 2a+b, 3a+b, 3a+2b
    assert rs.norm2((1, 0)) < rs.norm2((0, 1))
    assert set(rs.positive_roots) == {(1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)}


def test_f4_long_roots_first():
    rs = root_system("F4")
    assert rs.norm2((1, 0, 0, 0)) == rs.norm2((0, 1, 0, 0)) > rs.norm2((0, 0, 1, 0))


@pytest.mark.parametrize("bad", ["X3", "G3", "F5", "E9", "", "B1"])
def test_rejects_unknown_types(bad):
    with pytest.raises((CartanError, ValueError)):
        root_system(bad)


def test_rejects_non_finite_matrix():
    d = CartanDatum("A", 3, ((2, -1, 0), (-1, 2, -1), (-1, -1, 2)))
    with pytest.raises(CartanError):
        build_root_system(d)


names = st.sampled_from(EXCEPTIONAL + ["A3", "B3", "C3", "D4"])


@given(names, st.data())
def test_reflection_permutes_roots(name, data):
    rs = root_system(name)
    i = data.draw(st.integers(0, rs.rank - 1))
    r = data.draw(st.sampled_from(rs.roots))
    s = rs.reflect(i, r)
    assert s in rs.root_set
    assert rs.reflect(i, s) == tuple(r)
    assert rs.norm2(s) == rs.norm2(r)


@given(names, st.data())
def test_root_strings_are_unbroken(name, data):
    rs = root_system(name)
    a = data.draw(st.sampled_from(rs.roots))
    b = data.draw(st.sampled_from(rs.roots))
    if b in (a, neg(a)):
        return
    ks = rs.string_interval(a, b)
    assert ks == list(range(ks[0], ks[-1] + 1))
    assert len(ks) <= 4
    # the string through b has length p+q+1 and p-q = <b, a^vee>
    lo, hi = -ks[0], ks[-1]
    assert lo - hi == sum(c * rs.pairing(b, i) for i, c in enumerate(rs.coroot_coefficients(a)))
    if rs.is_root(add(a, b)):
        assert rs.root_string_bound(a, b) == lo + 1


@given(names, st.data())
def test_weight_coordinates_linear(name, data):
    rs = root_system(name)
    a = data.draw(st.sampled_from(rs.roots))
    b = data.draw(st.sampled_from(rs.roots))
    wa, wb = rs.weight_coords(a), rs.weight_coords(b)
    assert rs.weight_coords(scale(-1, a)) == tuple(-x for x in wa)
    if rs.is_root(add(a, b)):
        assert rs.weight_coords(add(a, b)) == tuple(x + y for x, y in zip(wa, wb))
