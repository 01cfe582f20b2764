import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import HEXAGON_CENTER_ROT, brute_chords, cycle_graph, path_graph
from tfplc.enumerate import embed
from tfplc.errors import EmbeddingError
from tfplc.fuzz import random_plane_graph, random_quadrangulation
from tfplc.plane import (
    SemiFan,
    boundary_walk,
    build_plane_graph,
    cut_vertices,
    cycle_interior,
    delete_vertices,
    find_i_chords,
    find_separating_cycles,
    identify_vertices,
    is_triangle_free,
    is_two_connected,
    semi_fan_in,
    simple_cycles,
    split_at_cycle,
    suppress_vertex,
)

PENTAGON_PLUS = {1: (2, 6, 5), 2: (3, 1), 3: (4, 6, 2), 4: (5, 3), 5: (1, 4), 6: (1, 3)}


def _nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def _adj0(edges, n):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return tuple(frozenset(a) for a in adj)


class TestBuild:
    def test_four_cycle(self, c4):
        assert len(c4.faces) == 2
        assert len(c4) - c4.n_edges + len(c4.faces) == 2
        assert c4.outer_face == (1, 2, 3, 4)

    def test_k4_is_planar_but_not_triangle_free(self):
        k4 = embed(_adj0(itertools.combinations(range(4), 2), 4))
        assert not is_triangle_free(k4)

    def test_k5_rotation_is_rejected(self):
        rot = {v: tuple(w for w in range(1, 6) if w != v) for v in range(1, 6)}
        with pytest.raises(EmbeddingError) as exc:
            build_plane_graph(rot)
        assert exc.value.code == "NOT_AN_EMBEDDING"

    def test_petersen_rotation_is_rejected(self):
        p = nx.petersen_graph()
        rot = {v + 1: tuple(w + 1 for w in sorted(p[v])) for v in p}
        with pytest.raises(EmbeddingError) as exc:
            build_plane_graph(rot)
        assert exc.value.code == "NOT_AN_EMBEDDING"

    def test_asymmetric(self):
        with pytest.raises(EmbeddingError) as exc:
            build_plane_graph({1: (2,), 2: ()})
        assert exc.value.code == "ASYMMETRIC_ADJACENCY"

    def test_outer_not_a_face(self, hexagon_center):
        with pytest.raises(EmbeddingError) as exc:
            build_plane_graph(HEXAGON_CENTER_ROT, (1, 2, 3, 5))
        assert exc.value.code == "OUTER_NOT_A_FACE"

    def test_reversed_outer_walk_mirrors(self):
        rot = {1: (2, 4), 2: (3, 1), 3: (4, 2), 4: (1, 3)}
        g = build_plane_graph(rot, (1, 2, 3, 4))
        m = build_plane_graph(rot, (4, 3, 2, 1))
        assert m.outer_face in {(4, 3, 2, 1), (3, 2, 1, 4), (2, 1, 4, 3), (1, 4, 3, 2)}
        assert g.mirror() == m


class TestBoundary:
    def test_four_cycle_walk(self, c4):
        b = boundary_walk(c4)
        assert b.cycle == (1, 2, 3, 4)
        assert b.pred(2) == 1 and b.succ(2) == 3
        assert b.is_simple

    def test_path_walk_repeats_cut_vertex(self):
        assert boundary_walk(path_graph(3)).cycle == (1, 2, 3, 2)

    def test_cube_outer_walk_has_length_four(self, cube):
        assert len(boundary_walk(cube)) == 4

    def test_walk_simple_iff_two_connected(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            g = random_plane_graph(int(rng.integers(3, 13)), rng)
            articulation = set(nx.articulation_points(_nx(g)))
            assert set(cut_vertices(g)) == articulation
            walk = boundary_walk(g)
            if not articulation and len(g) >= 3:
                assert walk.is_simple
            # a vertex met twice on the outer walk always separates
            repeated = {v for v in walk.cycle if walk.cycle.count(v) > 1}
            assert repeated <= articulation


class TestChords:
    def test_four_cycle_has_none(self, c4):
        for i in range(1, 5):
            assert find_i_chords(c4, i) == []

    def test_pentagon_with_inner_vertex(self):
        g = build_plane_graph(PENTAGON_PLUS, (1, 2, 3, 4, 5))
        assert [w.path for w in find_i_chords(g, 2)] == [(1, 6, 3)]

    def test_hexagon_center(self, hexagon_center):
        assert [w.path for w in find_i_chords(hexagon_center, 2)] == [(1, 7, 3), (1, 7, 5), (3, 7, 5)]

    def test_requires_two_connected(self):
        with pytest.raises(EmbeddingError) as exc:
            find_i_chords(path_graph(4), 1)
        assert exc.value.code == "NOT_TWO_CONNECTED"


class TestCycles:
    def test_four_cycle_has_no_separating_cycle(self, c4):
        assert all(find_separating_cycles(c4, k) == [] for k in (4, 5, 6))

    def test_cube_only_outer_four_cycle_encloses(self, cube):
        regions = find_separating_cycles(cube, 4)
        assert len(regions) == 1
        assert set(regions[0].cycle) == set(cube.outer_face)
        assert len(regions[0].interior_vertices) == 4

    def test_hexagon_center(self, hexagon_center):
        regions = find_separating_cycles(hexagon_center, 6)
        assert len(regions) == 1
        assert regions[0].interior_vertices == frozenset({7})

    def test_split_hexagon(self, hexagon_center):
        inner, outer = split_at_cycle(hexagon_center, (1, 2, 3, 4, 5, 6))
        assert set(inner.vertices) == set(range(1, 8))
        assert set(outer.vertices) == set(range(1, 7))

    def test_split_cube_at_inner_face(self, cube):
        # the face opposite the outer one
        outer = set(cube.outer_face)
        inner_face = next(f for f in cube.faces if not set(f) & outer)
        inside, ext = split_at_cycle(cube, inner_face)
        assert set(inside.vertices) == set(inner_face)
        assert set(ext.vertices) == set(cube.vertices)

    def test_split_cycle_at_itself(self, c4):
        a, b = split_at_cycle(c4, (1, 2, 3, 4))
        assert a == b == c4

    def test_split_rejects_non_cycle(self, c4):
        with pytest.raises(EmbeddingError) as exc:
            split_at_cycle(c4, (1, 2, 3))
        assert exc.value.code == "NOT_A_CYCLE"

    def test_split_invariants_on_random_graphs(self):
        rng = np.random.default_rng(5)
        checked = 0
        for _ in range(40):
            g = random_quadrangulation(int(rng.integers(8, 14)), rng)
            for k in (4, 6):
                for c in simple_cycles(g, k):
                    inner, ext = split_at_cycle(g, c)
                    vi, ve = set(inner.vertices), set(ext.vertices)
                    assert vi & ve == set(c)
                    assert vi | ve == set(g.vertices)
                    ei, ee = set(inner.edges), set(ext.edges)
                    cyc_edges = {tuple(sorted((c[j], c[(j + 1) % k]))) for j in range(k)}
                    assert ei & ee == cyc_edges
                    assert ei | ee == set(g.edges)
                    checked += 1
        assert checked > 50


class TestEdits:
    def test_identify_across_four_cycle(self, c4):
        h = identify_vertices(c4, 1, 3)
        assert {v: set(h.neighbours(v)) for v in h.vertices} == {1: {2, 4}, 2: {1}, 4: {1}}

    def test_identify_antipodal_hexagon_fails(self):
        g = cycle_graph(6)
        with pytest.raises(EmbeddingError):
            identify_vertices(g, 1, 4, via=2)

    def test_identify_adjacent_fails(self, c4):
        with pytest.raises(EmbeddingError) as exc:
            identify_vertices(c4, 1, 2)
        assert exc.value.code == "ADJACENT_VERTICES"

    def test_identify_in_hexagon_center_creates_no_triangle(self, hexagon_center):
        h = identify_vertices(hexagon_center, 1, 3, via=2)
        assert set(h.neighbours(1)) == {2, 4, 6, 7}
        assert is_triangle_free(h)

    def test_identify_then_delete_matches_delete(self):
        rng = np.random.default_rng(2)
        done = 0
        while done < 30:
            g = random_quadrangulation(int(rng.integers(8, 11)), rng)
            for f in g.faces:
                if len(f) != 4:
                    continue
                u, x, v, _ = f
                try:
                    h = identify_vertices(g, u, v, via=x)
                except EmbeddingError:
                    continue
                a = delete_vertices(h, {u})
                b = delete_vertices(g, {u, v})
                assert nx.is_isomorphic(_nx(a), _nx(b))
                done += 1
                break

    def test_delete(self, c4, hexagon_center, cube):
        assert boundary_walk(delete_vertices(c4, {4})).cycle == (1, 2, 3, 2)
        assert delete_vertices(hexagon_center, {7}) == cycle_graph(6)
        h = delete_vertices(cube, {cube.outer_face[0]})
        assert len(h) == 7 and len(h) - h.n_edges + len(h.faces) == 2

    def test_suppress(self, hexagon_center):
        h = suppress_vertex(hexagon_center, 2)
        assert h.adjacent(1, 3)
        with pytest.raises(EmbeddingError):
            suppress_vertex(hexagon_center, 7)


def test_cycle_interior_of_face_is_empty(hexagon_center):
    assert cycle_interior(hexagon_center, (1, 2, 3, 7)) == frozenset()


def test_semi_fan_in(hexagon_center):
    g = delete_vertices(hexagon_center, {6})
    assert semi_fan_in(g, 7, (1, 2, 3, 4, 5))
    assert semi_fan_in(g, 7, (1, 2, 3))
    assert not semi_fan_in(g, 7, (2, 3, 4))
    assert not semi_fan_in(g, 7, (1, 2, 3, 4))
    assert SemiFan(7, (1, 2, 3, 4, 5)).q == 2


@given(st.integers(6, 12), st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_i_chords_match_brute_force(n, seed):
    rng = np.random.default_rng(seed)
    g = random_quadrangulation(n, rng)
    if not is_two_connected(g):
        return
    for i in range(1, 5):
        assert [w.path for w in find_i_chords(g, i)] == brute_chords(g, i)
