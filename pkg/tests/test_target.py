import numpy as np
import pytest

from conftest import cycle_edges, cycle_graph, plane_from_edges
from tfplc.errors import TargetError
from tfplc.fuzz import random_target
from tfplc.plane import IChord, find_i_chords, is_two_connected
from tfplc.target import (
    bad_4cycles,
    bad_edges,
    bad_vertices,
    chord_split,
    classify_chord,
    is_valid,
    make_target,
    validity_report,
)


def _lists(sizes, base=None):
    """List of the given size per vertex, drawn from 1, 2, 3, 4 unless overridden."""
    out = {v: set(range(1, s + 1)) for v, s in sizes.items()}
    out.update(base or {})
    return out


# 5-cycle with an interior vertex 6 joined to 1 and 3
PENT6 = cycle_edges(5) + [(1, 6), (6, 3)]


class TestMakeTarget:
    def test_four_cycle_all_threes(self, c4):
        t = make_target(c4, (), {v: {1, 2, 3} for v in c4.vertices})
        assert t.k == 0 and is_valid(t)

    def test_hexagon_center(self, hexagon_center):
        t = make_target(hexagon_center, (), {v: {1, 2, 3} for v in hexagon_center.vertices})
        assert t.s_set == {7}

    def test_adjacent_interior_threes(self, cube):
        inner = [v for v in cube.vertices if not cube.is_boundary(v)]
        u = inner[0]
        w = next(x for x in cube.neighbours(u) if x in inner)
        lists = {v: {1, 2, 3, 4} for v in cube.vertices}
        lists[u] = lists[w] = {1, 2, 3}
        with pytest.raises(TargetError) as exc:
            make_target(cube, (), lists)
        assert exc.value.code == "S_NOT_INDEPENDENT"

    def test_triangle(self):
        g = plane_from_edges([(1, 2), (2, 3), (3, 1)], (1, 2, 3))
        with pytest.raises(TargetError) as exc:
            make_target(g, (), {v: {1, 2} for v in (1, 2, 3)})
        assert exc.value.code == "NOT_TRIANGLE_FREE"

    @pytest.mark.parametrize(
        "p, code",
        [((1, 2, 3, 4, 5, 6), "P_TOO_LONG"), ((1, 3), "P_NOT_BOUNDARY_PATH"), ((1, 2, 4), "P_NOT_BOUNDARY_PATH")],
    )
    def test_bad_paths(self, p, code):
        g = cycle_graph(8)
        with pytest.raises(TargetError) as exc:
            make_target(g, p, {v: {1, 2} for v in g.vertices})
        assert exc.value.code == code

    def test_path_may_run_either_way(self):
        g = cycle_graph(6)
        lists = {v: {1, 2, 3} for v in g.vertices}
        assert make_target(g, (3, 2, 1), lists).p == (3, 2, 1)
        assert make_target(g, (6, 1, 2), lists).k == 3

    def test_missing_and_out_of_range(self, c4):
        with pytest.raises(TargetError) as exc:
            make_target(c4, (), {1: {1, 2}, 2: {1, 2}, 3: {1, 2}})
        assert exc.value.code == "MISSING_LIST"
        with pytest.raises(TargetError) as exc:
            make_target(c4, (), {1: {1}, 2: {1, 2}, 3: {1, 2}, 4: {1, 2}})
        assert exc.value.code == "LIST_SIZE_OUT_OF_RANGE"
        assert "boundary vertex" in str(exc.value)
        with pytest.raises(TargetError):
            make_target(c4, (), {v: {1, 2, 3, 4, 5} for v in c4.vertices})

    def test_path_vertex_may_have_one_colour(self, c4):
        t = make_target(c4, (1,), {1: {7}, 2: {1, 2}, 3: {1, 2}, 4: {1, 2}})
        assert t.lists[1] == frozenset({7})

    def test_measure(self, c4):
        t = make_target(c4, (), {v: {1, 2, 3} for v in c4.vertices})
        assert t.measure() == (4, 12)

    def test_p_edges_are_not_constraints(self, c4):
        t = make_target(c4, (1, 2, 3, 4), {v: {1} for v in c4.vertices})
        assert t.constraint_edges() == []


class TestValidity:
    def test_k4_has_no_bad_vertex(self):
        g = cycle_graph(6)
        t = make_target(g, (1, 2, 3, 4), {1: {1}, 2: {2}, 3: {1}, 4: {2}, 5: {1, 2, 3}, 6: {1, 2, 3}})
        assert bad_vertices(t) == []

    def test_no_two_lists_nothing_bad(self, hexagon_center):
        t = make_target(hexagon_center, (1, 2), {v: {1, 2, 3} for v in hexagon_center.vertices} | {1: {1}, 2: {2}})
        assert bad_edges(t) == [] and bad_4cycles(t) == []

    def test_bad_vertex_with_one_spare_colour(self):
        g = plane_from_edges(cycle_edges(8) + [(1, 9), (9, 3)], range(1, 9))
        lists = {1: {1}, 2: {3}, 3: {2}, 4: {4}, 5: {4}, 6: {1, 2, 3}, 7: {1, 2, 3}, 8: {1, 2, 3}, 9: {1, 2, 3}}
        t = make_target(g, (1, 2, 3, 4, 5), lists)
        assert bad_vertices(t) == [9]
        lists[9] = {1, 2, 3, 4}
        assert bad_vertices(make_target(g, (1, 2, 3, 4, 5), lists)) == []

    def test_bad_vertex_list_covered(self):
        g = cycle_graph(7)
        lists = {1: {1}, 2: {2}, 3: {3}, 4: {4}, 5: {5}, 6: {5, 6, 7}, 7: {1, 2}}
        t = make_target(g, (1, 2, 3, 4, 5), lists)
        assert bad_vertices(t) == []
        lists[7] = {1, 2}
        lists[1] = {1, 2}
        # 7 sees only p1, whose list covers L(7)
        t = make_target(g, (1, 2, 3, 4, 5), lists)
        assert 7 in bad_vertices(t)

    def test_bad_four_cycle(self):
        g = plane_from_edges(cycle_edges(6) + [(1, 7), (7, 3)], range(1, 7))
        lists = {v: {1, 2, 3} for v in range(1, 8)}
        lists[2] = {1, 2}
        t = make_target(g, (), lists)
        assert bad_4cycles(t) == [(1, 2, 3, 7)]
        assert bad_edges(t) == [] and not is_valid(t)
        lists[1] = {1, 2, 3, 4}
        assert bad_4cycles(make_target(g, (), lists)) == []

    def test_two_two_edge(self):
        g = cycle_graph(6)
        lists = {v: {1, 2, 3} for v in g.vertices} | {4: {1, 2}, 5: {1, 2}}
        assert bad_edges(make_target(g, (), lists)) == [(4, 5)]

    def test_end_of_path_anchor_depends_on_k(self):
        g = cycle_graph(7)
        lists = {v: {1, 2, 3} for v in g.vertices} | {1: {1}, 2: {2}, 3: {1}, 4: {1, 2}}
        assert bad_edges(make_target(g, (1, 2, 3), lists)) == [(3, 4)]
        # with k = 2 there is no anchor clause
        lists[3] = {1, 2, 3}
        assert bad_edges(make_target(g, (1, 2), lists)) == []

    def test_k5_anchors_every_path_vertex(self):
        g = plane_from_edges(cycle_edges(8) + [(2, 9), (9, 6)], range(1, 9))
        lists = {v: {1, 2, 3} for v in range(1, 10)} | {v: {v} for v in (1, 2, 3, 4, 5)}
        lists[9] = {3, 4, 5, 6}
        assert bad_edges(make_target(g, (1, 2, 3, 4, 5), lists)) == []
        lists[9] = {7, 8}
        # interior vertices may not have 2-lists; use a boundary one instead
        with pytest.raises(TargetError):
            make_target(g, (1, 2, 3, 4, 5), lists)
        lists[9] = {3, 4, 5, 6}
        lists[8] = {6, 7}
        assert bad_edges(make_target(g, (1, 2, 3, 4, 5), lists)) == [(1, 8)]

    def test_report_dict(self, c4):
        rep = validity_report(make_target(c4, (), {v: {1, 2} for v in c4.vertices}))
        d = rep.to_dict()
        assert d["is_valid"] is False and len(d["bad_edges"]) == 4


# ---------------------------------------------------------------------------
# second evaluator, written straight from the quantifiers
# ---------------------------------------------------------------------------


def _ref_bad_vertices(t):
    g, L, P = t.graph, t.lists, set(t.p)
    if len(P) != 5:
        return set()
    out = set()
    for u in set(g.vertices) - P:
        nbp = set(g.neighbours(u)) & P
        if not nbp:
            continue
        union = set()
        for x in nbp:
            union |= L[x]
        if set(L[u]) <= union or (len(nbp) == 2 and len(set(L[u]) - union) == 1):
            out.add(u)
    return out


def _ref_bad_edges(t):
    g, L, P, k = t.graph, t.lists, set(t.p), t.k
    out = set()
    for x in g.vertices:
        for y in g.neighbours(x):
            if x in P and y in P:
                continue
            e = frozenset((x, y))
            if len(L[x]) == 2 and len(L[y]) == 2:
                out.add(e)
            if k in (3, 4) and x in (t.p[0], t.p[-1]) and y not in P and len(L[y]) == 2:
                out.add(e)
            if k == 5 and x in P and y not in P and len(L[y]) == 2:
                out.add(e)
    return out


def _ref_bad_4cycles(t):
    g, L = t.graph, t.lists
    walk = g.outer_face
    n = len(walk)
    consecutive = set()
    for i in range(n):
        consecutive.add((walk[i - 1], walk[i], walk[(i + 1) % n]))
        consecutive.add((walk[(i + 1) % n], walk[i], walk[i - 1]))
    out = set()
    for x, y, z in consecutive:
        if x == z:
            continue
        for w in g.vertices:
            if g.is_boundary(w) or w in (x, y, z):
                continue
            if g.adjacent(w, x) and g.adjacent(w, z) and [len(L[a]) for a in (x, y, z, w)] == [3, 2, 3, 3]:
                out.add((min(x, z), y, max(x, z), w))
    return out


def _rand_targets(count, seed, valid=False):
    rng = np.random.default_rng(seed)
    for i in range(count):
        yield random_target(int(rng.integers(3, 13)), rng, universe=5, precoloured=i % 2 == 0, valid=valid)


def test_validity_matches_reference_evaluator():
    seen_bad = [0, 0, 0]
    for t in _rand_targets(600, 17):
        bv, be, bc = bad_vertices(t), bad_edges(t), bad_4cycles(t)
        assert set(bv) == _ref_bad_vertices(t)
        assert {frozenset(e) for e in be} == _ref_bad_edges(t)
        assert set(bc) == _ref_bad_4cycles(t)
        for i, x in enumerate((bv, be, bc)):
            seen_bad[i] += bool(x)
    # the sample exercises every clause
    assert all(seen_bad)


def test_obstruction_properties():
    for t in _rand_targets(600, 23):
        if t.k <= 4:
            assert bad_vertices(t) == []
        if all(len(c) != 2 for c in t.lists.values()):
            assert bad_edges(t) == [] and bad_4cycles(t) == []
        if any(len(t.lists[p]) != 1 for p in t.p):
            continue
        # with P precoloured a 4-list or a single P-neighbour is never bad
        pset = t.p_set
        for u in bad_vertices(t):
            assert len(t.lists[u]) != 4
            assert len(set(t.graph.neighbours(u)) & pset) >= 2


def test_generated_valid_targets_are_valid():
    for t in _rand_targets(100, 3, valid=True):
        assert is_valid(t)


# ---------------------------------------------------------------------------
# chords
# ---------------------------------------------------------------------------


class TestChordSplit:
    def _target(self, l2, p=(4, 5)):
        g = plane_from_edges(PENT6, range(1, 6))
        lists = {v: {1, 2, 3} for v in range(1, 7)} | {v: {9} for v in p}
        lists[2] = set(range(1, l2 + 1))
        return make_target(g, p, lists)

    def test_infeasible_shape_one(self):
        t = self._target(2)
        (w,) = find_i_chords(t.graph, 2)
        cs = chord_split(t, w)
        assert set(cs.g2.vertices) == {1, 2, 3, 6}
        assert cs.u not in t.p_set and cs.v not in t.p_set
        assert not cs.feasible and cs.infeasible_shape == 1

    def test_feasible_far_from_path(self):
        t = self._target(3)
        (w,) = find_i_chords(t.graph, 2)
        cs = chord_split(t, w)
        assert cs.feasible and cs.infeasible_shape == 0
        assert set(cs.p_w) == set(w.path)
        assert set(cs.g1_aug.vertices) == {1, 3, 4, 5, 6}

    def test_partition(self):
        t = self._target(3)
        (w,) = find_i_chords(t.graph, 2)
        cs = chord_split(t, w)
        v1, v2 = set(cs.g1.vertices), set(cs.g2.vertices)
        assert v1 & v2 == set(w.path)
        assert v1 | v2 == set(t.graph.vertices)
        walk = t.graph.outer_face
        i, j = walk.index(cs.u), walk.index(cs.v)
        assert walk[i - 1] in v2 and walk[(j + 1) % len(walk)] in v2

    def test_path_through_chord_on_eight_cycle(self):
        # 8-cycle with P = 1 2 3 and a 2-chord 3-9-6
        g = plane_from_edges(cycle_edges(8) + [(3, 9), (9, 6)], range(1, 9))
        lists = {v: {1, 2, 3} for v in range(1, 10)} | {1: {1}, 2: {2}, 3: {3}}
        lists[4] = {1, 2}
        t = make_target(g, (1, 2, 3), lists)
        w = next(c for c in find_i_chords(g, 2) if set(c.path) == {3, 9, 6})
        cs = chord_split(t, w)
        assert set(t.p) <= set(cs.g1.vertices)
        assert set(cs.g2.vertices) == {3, 4, 5, 6, 9}
        # the 2-list neighbour of the chord end joins P_W
        assert set(cs.p_w) == {3, 4, 6, 9}
        assert cs.feasible

    def test_not_a_chord(self):
        t = self._target(3)
        with pytest.raises(TargetError) as exc:
            chord_split(t, IChord((1, 2)))
        assert exc.value.code == "NOT_A_CHORD"

    def test_classify(self):
        g = plane_from_edges(PENT6, range(1, 6))
        lists = {1: {1}, 2: {3}, 3: {2}, 4: {1, 2, 3}, 5: {1, 2, 3}, 6: {1, 2, 3, 4}}
        t = make_target(g, (1, 2, 3), lists)
        (w,) = find_i_chords(g, 2)
        assert classify_chord(t, w) == (1, 1, 2)


def test_split_invariants_on_fuzzed_targets():
    checked = 0
    rng = np.random.default_rng(8)
    for i in range(800):
        t = random_target(int(rng.integers(6, 13)), rng, family=("quad", "delaunay")[i % 2])
        g = t.graph
        if not is_two_connected(g):
            continue
        for i in (1, 2, 3):
            for w in find_i_chords(g, i):
                cs = chord_split(t, w)
                v1, v2 = set(cs.g1.vertices), set(cs.g2.vertices)
                assert v1 & v2 == set(w.path) and v1 | v2 == set(g.vertices)
                if cs.p_w is not None:
                    assert set(w.path) <= set(cs.p_w)
                if not cs.feasible:
                    # the only unmatched case: P is the whole outer walk
                    assert cs.infeasible_shape in (1, 2, 3) or set(g.outer_face) == t.p_set
                checked += 1
    assert checked > 800
