from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from badlie.rootsystem import root_system
from badlie.weights import all_weights, dot_reflect, encode, orbit_count, orbit_of
from oracles import dot_orbits_bfs

# orbit counts on Lambda_0 frozen from the plain-Python oracle in tests/oracles.py
ORBITS = {("G2", 2): 2, ("G2", 3): 3, ("F4", 2): 3, ("F4", 3): 4, ("E6", 2): 3, ("E6", 3): 8,
          ("E7", 2): 4, ("E7", 3): 6, ("E8", 2): 3, ("E8", 3): 5}


def test_dot_reflect_examples():
    assert [dot_reflect("A1", 0, (l,), 2) for l in range(2)] == [(0,), (1,)]
    assert dot_reflect("A1", 0, (0,), 3) == (1,)
    for name, p in [("G2", 3), ("F4", 2), ("E8", 5)]:
        rs = root_system(name)
        minus_rho = (p - 1,) * rs.rank
        assert all(dot_reflect(rs, i, minus_rho, p) == minus_rho for i in range(rs.rank))
    with pytest.raises(IndexError):
        dot_reflect("G2", 2, (0, 0), 3)


@pytest.mark.parametrize("case", sorted(ORBITS))
def test_orbit_counts(case):
    rep = orbit_count(*case)
    assert rep.orbit_count == ORBITS[case]
    assert sum(rep.orbit_sizes) == case[1] ** root_system(case[0]).rank
    W = root_system(case[0]).weyl_order
    assert all(W % s == 0 for s in rep.orbit_sizes)


@pytest.mark.parametrize("case", [("G2", 2), ("G2", 3), ("F4", 2), ("F4", 3), ("E6", 2), ("E6", 3),
                                  ("E7", 2), ("E7", 3), ("E8", 2), ("E8", 3), ("B3", 5), ("A3", 5)])
def test_orbit_sizes_match_plain_bfs(case):
    name, p = case
    rep = orbit_count(name, p)
    assert sorted(rep.orbit_sizes) == sorted(dot_orbits_bfs(root_system(name).cartan.tolist(), p))


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_a1_closed_form(p):
    assert orbit_count("A1", p).orbit_count == (p + 1) // 2


def test_g2_p3_orbits():
    rep = orbit_count("G2", 3)
    assert sorted(rep.orbit_sizes) == [1, 2, 6]
    assert rep.representatives[0] == (0, 0)
    doc = rep.to_json()
    assert set(doc) == {"type", "p", "orbit_count", "orbit_sizes", "representatives"}


def test_labels_are_lexicographic_and_stable():
    rep = orbit_count("F4", 3)
    W = all_weights(4, 3)
    for k, r in enumerate(rep.representatives):
        members = W[rep.labels == k]
        assert tuple(members[0]) == r
    assert list(rep.representatives) == sorted(rep.representatives)


def test_all_weights_and_encode():
    W = all_weights(3, 5)
    assert len(W) == 125
    assert np.array_equal(encode(W, 5), np.arange(125))


cases = st.sampled_from([("G2", 3), ("F4", 2), ("E6", 3), ("E8", 5), ("B3", 7), ("A2", 5)])


@given(cases, st.data())
def test_dot_reflect_is_an_involution(case, data):
    name, p = case
    rs = root_system(name)
    lam = tuple(data.draw(st.lists(st.integers(0, p - 1), min_size=rs.rank, max_size=rs.rank)))
    i = data.draw(st.integers(0, rs.rank - 1))
    assert dot_reflect(rs, i, dot_reflect(rs, i, lam, p), p) == lam


@given(st.sampled_from([("G2", 3), ("F4", 2), ("A2", 5), ("B3", 3)]), st.data())
def test_orbit_of_matches_component(case, data):
    name, p = case
    rs = root_system(name)
    lam = tuple(data.draw(st.lists(st.integers(0, p - 1), min_size=rs.rank, max_size=rs.rank)))
    rep = orbit_count(name, p)
    orb = orbit_of(name, lam, p)
    label = rep.labels[encode(lam, p)[0]]
    assert len(orb) == rep.orbit_sizes[label]
    assert all(rep.labels[encode(mu, p)[0]] == label for mu in orb)
