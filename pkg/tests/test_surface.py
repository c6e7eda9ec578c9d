import itertools
import json
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from signed_penner.errors import ConstraintViolation, FlipUndefined
from signed_penner.surface import (Triangulation, all_corners, automorphisms, catalan,
                                   corners_at, double_flip_isomorphism,
                                   enumerate_polygon_triangulations, find_isomorphism,
                                   flip_combinatorial, new_surface, polygon_cut, quad_of,
                                   subcover)

from _support import SURFACES


def check_counts(tri):
    k = tri.kappa
    assert len(tri.edges) == 3 * k
    assert len(tri.faces) == 2 * k
    assert len(tri.vertex_orbits) == tri.punctures
    assert len(all_corners(tri)) == 6 * k
    assert tri.euler_characteristic() == 2 - 2 * tri.genus


@pytest.mark.parametrize("g,s", SURFACES + [(0, 5), (2, 2), (3, 1)])
def test_canonical_counts(g, s):
    check_counts(new_surface(g, s))


def test_torus_counts():
    t = new_surface(1, 1)
    assert (len(t.faces), len(t.edges), t.punctures, len(all_corners(t))) == (2, 3, 1, 6)


def test_pants_euler():
    t = new_surface(0, 3)
    assert (len(t.vertex_orbits), len(t.edges), len(t.faces)) == (3, 3, 2)
    assert 3 - 3 + 2 == t.euler_characteristic() == 2


def test_tetrahedron_counts():
    t = new_surface(0, 4)
    assert (len(t.faces), len(t.edges), t.punctures) == (4, 6, 4)


@pytest.mark.parametrize("g,s", [(0, 1), (0, 2), (1, 0), (-1, 3)])
def test_bad_surface(g, s):
    with pytest.raises(ConstraintViolation):
        new_surface(g, s)


def test_rejects_broken_maps():
    t = new_surface(1, 1)
    with pytest.raises(ConstraintViolation):
        Triangulation(t.faces, t.edges, 0, 1)
    with pytest.raises(ConstraintViolation):
        Triangulation(((0, 1, 2), (3, 4, 4)), t.edges, 1, 1)
    with pytest.raises(ConstraintViolation):
        Triangulation(t.faces, ((0, 1), (2, 3)), 1, 1)


def test_json_round_trip():
    for g, s in SURFACES:
        t = new_surface(g, s)
        assert Triangulation.from_json(json.dumps(t.to_json())) == t


def test_torus_quads():
    t = new_surface(1, 1)
    for e in range(3):
        q = quad_of(t, e)
        others = set(range(3)) - {e}
        assert (q.a, q.b) == (q.c, q.d)
        assert {q.a, q.b} == others


def test_tetrahedron_quads_distinct():
    t = new_surface(0, 4)
    for e in range(6):
        q = quad_of(t, e)
        assert len({q.a, q.b, q.c, q.d}) == 4


def test_self_folded_edge_not_flippable():
    t, _ = flip_combinatorial(new_surface(0, 3), 0)
    bad = [e for e in range(3) if t.face_of[t.edges[e][0]] == t.face_of[t.edges[e][1]]]
    assert bad
    with pytest.raises(FlipUndefined):
        quad_of(t, bad[0])


@pytest.mark.parametrize("g,s", SURFACES)
def test_flip_preserves_counts_and_double_flip(g, s):
    t = new_surface(g, s)
    for e in range(len(t.edges)):
        try:
            t1, _ = flip_combinatorial(t, e)
        except FlipUndefined:
            continue
        check_counts(t1)
        t2, _ = flip_combinatorial(t1, e)
        m = double_flip_isomorphism(t, e)
        assert find_isomorphism(t, t2, anchor=(0, m[0])) == m


def test_flipped_quad_has_new_diagonal():
    t = new_surface(0, 4)
    q = quad_of(t, 0)
    t1, _ = flip_combinatorial(t, 0)
    q1 = quad_of(t1, 0)
    assert {q1.a, q1.b, q1.c, q1.d} == {q.a, q.b, q.c, q.d}
    # on the tetrahedron the new diagonal joins the two other punctures
    assert set(t1.endpoints(0)).isdisjoint(t.endpoints(0))


def test_torus_flips_isomorphic():
    t = new_surface(1, 1)
    for e in range(3):
        t1, _ = flip_combinatorial(t, e)
        assert find_isomorphism(t, t1) is not None


def test_corner_counts():
    assert len(corners_at(new_surface(1, 1), 0)) == 6
    pants = new_surface(0, 3)
    assert [len(corners_at(pants, p)) for p in range(3)] == [2, 2, 2]
    for g, s in SURFACES:
        t = new_surface(g, s)
        assert sum(len(corners_at(t, p)) for p in range(s)) == 3 * len(t.faces)


def test_corner_fields():
    t = new_surface(0, 4)
    for p in range(4):
        for c in corners_at(t, p):
            assert t.vertex_of[c.halfedge] == p
            face = t.faces[c.face]
            assert c.halfedge in face
            assert {c.opposite, c.side_a, c.side_b} == {t.edge_of[h] for h in face}


def test_corners_in_rotation_order():
    t = new_surface(1, 2)
    for p in range(2):
        hs = [c.halfedge for c in corners_at(t, p)]
        for x, y in zip(hs, hs[1:] + hs[:1]):
            assert t.rho[x] == y


def test_automorphism_counts():
    got = {gs: len(automorphisms(new_surface(*gs))) for gs in SURFACES}
    assert got == {(1, 1): 6, (0, 3): 6, (0, 4): 12, (1, 2): 3, (2, 1): 2}


def test_catalan_small():
    assert len(enumerate_polygon_triangulations(3)) == 1
    assert enumerate_polygon_triangulations(3)[0] == frozenset()
    assert len(enumerate_polygon_triangulations(4)) == 2
    assert len(enumerate_polygon_triangulations(6)) == 14


def crosses(d1, d2):
    (a, b), (c, d) = sorted(d1), sorted(d2)
    return a < c < b < d or c < a < d < b


def brute_force_triangulations(n):
    diags = [(i, j) for i in range(n) for j in range(i + 2, n) if not (i == 0 and j == n - 1)]
    out = set()
    for combo in itertools.combinations(diags, n - 3):
        if all(not crosses(x, y) for x, y in itertools.combinations(combo, 2)):
            out.add(frozenset(combo))
    return out


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_catalan_brute_force(n):
    got = enumerate_polygon_triangulations(n)
    assert len(got) == len(set(got))
    assert {frozenset(tuple(sorted(d)) for d in t) for t in got} == brute_force_triangulations(n)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_catalan_formula(k):
    assert len(enumerate_polygon_triangulations(2 * k + 2)) == comb(4 * k, 2 * k) // (2 * k + 1)
    assert catalan(2 * k) == comb(4 * k, 2 * k) // (2 * k + 1)


@pytest.mark.parametrize("g,s", [(1, 1), (0, 4), (1, 2)])
def test_polygon_cut_and_subcover(g, s):
    t = new_surface(g, s)
    cut, sides = polygon_cut(t)
    assert len(cut) == t.kappa + 1
    assert len(sides) == 2 * t.kappa + 2
    cover = subcover(t)
    assert len(cover) == catalan(2 * t.kappa)
    for x in cover:
        check_counts(x)
        for e in cut:
            assert set(x.edges[e]) == set(t.edges[e])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SURFACES), st.lists(st.integers(0, 100), max_size=15))
def test_random_flips_keep_invariants(gs, picks):
    t = new_surface(*gs)
    for x in picks:
        e = x % len(t.edges)
        try:
            t, _ = flip_combinatorial(t, e)
        except FlipUndefined:
            continue
        check_counts(t)
        assert len(set(t.anchors)) == t.punctures


def test_commuting_flips_give_equal_labels():
    t = new_surface(0, 4)
    for x, y in [(0, 5), (1, 3), (2, 4)]:
        a, _ = flip_combinatorial(flip_combinatorial(t, x)[0], y)
        b, _ = flip_combinatorial(flip_combinatorial(t, y)[0], x)
        assert a == b


def test_anchor_normalized_within_orbit():
    t = new_surface(0, 4)
    other = tuple(max(t.orbit(h)) for h in t.anchors)
    assert Triangulation(t.faces, t.edges, 0, 4, other) == t
    with pytest.raises(ConstraintViolation):
        Triangulation(t.faces, t.edges, 0, 4, (t.anchors[0],) * 4)
