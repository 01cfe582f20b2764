"""Targets, their validity, and chord splits.

A target bundles a triangle-free plane graph, a short path ``P`` on the outer
boundary and a list assignment.  Colour lists are frozensets of small ints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import EmbeddingError, TargetError
from .plane import IChord, PlaneGraph, cycle_interior, is_triangle_free, is_two_connected, split_at_cycle

Lists = Mapping[int, frozenset]


def freeze_lists(lists: Mapping[int, Iterable[int]]) -> dict[int, frozenset]:
    return {v: frozenset(c) for v, c in lists.items()}


@dataclass(frozen=True, eq=False)
class Target:
    """A triple ``(graph, p, lists)``; build through :func:`make_target`."""

    graph: PlaneGraph
    p: tuple[int, ...]
    lists: Mapping[int, frozenset]

    @property
    def k(self) -> int:
        return len(self.p)

    @cached_property
    def p_set(self) -> frozenset[int]:
        return frozenset(self.p)

    @cached_property
    def p_edges(self) -> frozenset[frozenset[int]]:
        """Edges with both ends in ``P``; they impose no colouring constraint."""
        g = self.graph
        return frozenset(
            frozenset((a, b)) for a in self.p for b in g.neighbours(a) if b in self.p_set and a < b
        )

    @cached_property
    def s_set(self) -> frozenset[int]:
        """Interior vertices with 3-lists."""
        g = self.graph
        return frozenset(v for v in g.vertices if not g.is_boundary(v) and len(self.lists[v]) == 3)

    def constraint_edges(self) -> list[tuple[int, int]]:
        pe = self.p_edges
        return [e for e in self.graph.edges if frozenset(e) not in pe]

    def measure(self) -> tuple[int, int]:
        return len(self.graph), sum(len(c) for c in self.lists.values())

    def __repr__(self) -> str:
        return f"Target(n={len(self.graph)}, P={self.p})"


def _p_on_boundary(g: PlaneGraph, p: Sequence[int]) -> bool:
    k = len(p)
    if k == 0:
        return True
    if len(set(p)) != k or any(v not in g for v in p):
        return False
    if any(not g.adjacent(p[i], p[i + 1]) for i in range(k - 1)):
        return False
    for walk in g.outer_faces:
        n = len(walk)
        if k > n:
            continue
        for seq in (walk, walk[::-1]):
            for off in range(n):
                if all(seq[(off + i) % n] == p[i] for i in range(k)):
                    return True
    return False


def make_target(g: PlaneGraph, p: Sequence[int], lists: Mapping[int, Iterable[int]]) -> Target:
    """Check the structural conditions on a target and package it.

    Raises:
        TargetError: ``NOT_TRIANGLE_FREE``, ``P_TOO_LONG``,
            ``P_NOT_BOUNDARY_PATH``, ``MISSING_LIST``,
            ``LIST_SIZE_OUT_OF_RANGE`` or ``S_NOT_INDEPENDENT``.
    """
    p = tuple(p)
    lists = freeze_lists(lists)
    if not is_triangle_free(g):
        raise TargetError("NOT_TRIANGLE_FREE", "graph contains a triangle")
    if len(p) > 5:
        raise TargetError("P_TOO_LONG", f"P has {len(p)} vertices")
    if not _p_on_boundary(g, p):
        raise TargetError("P_NOT_BOUNDARY_PATH", f"{p} is not a path along the outer boundary")
    pset = set(p)
    for v in g.vertices:
        if v not in lists:
            raise TargetError("MISSING_LIST", f"vertex {v} has no list")
        size = len(lists[v])
        if v in pset:
            lo, clause = 1, "path vertex"
        elif g.is_boundary(v):
            lo, clause = 2, "boundary vertex"
        else:
            lo, clause = 3, "interior vertex"
        if not lo <= size <= 4:
            raise TargetError("LIST_SIZE_OUT_OF_RANGE", f"vertex {v} ({clause}) has list size {size}")
    t = Target(g, p, {v: lists[v] for v in g.vertices})
    s = t.s_set
    for v in s:
        for w in g.neighbours(v):
            if w in s:
                raise TargetError("S_NOT_INDEPENDENT", f"3-list interior vertices {min(v, w)} and {max(v, w)} are adjacent")
    return t


# ---------------------------------------------------------------------------
# Validity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidityReport:
    bad_vertices: list[int] = field(default_factory=list)
    bad_edges: list[tuple[int, int]] = field(default_factory=list)
    bad_4cycles: list[tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not (self.bad_vertices or self.bad_edges or self.bad_4cycles)

    def to_dict(self) -> dict:
        return {
            "is_valid": self.is_valid,
            "bad_vertices": self.bad_vertices,
            "bad_edges": [list(e) for e in self.bad_edges],
            "bad_4cycles": [list(c) for c in self.bad_4cycles],
        }


def bad_vertices(t: Target) -> list[int]:
    if t.k != 5:
        return []
    g, lists, pset = t.graph, t.lists, t.p_set
    out = []
    for u in g.vertices:
        if u in pset:
            continue
        nbp = [x for x in g.neighbours(u) if x in pset]
        if not nbp:
            continue
        union = frozenset().union(*(lists[x] for x in nbp))
        lu = lists[u]
        if lu <= union or (len(nbp) == 2 and len(lu - union) == 1):
            out.append(u)
    return sorted(out)


def bad_edges(t: Target) -> list[tuple[int, int]]:
    g, lists, pset, k = t.graph, t.lists, t.p_set, t.k
    if k in (3, 4):
        anchors = {t.p[0], t.p[-1]}
    elif k == 5:
        anchors = set(pset)
    else:
        anchors = set()
    out = []
    for x, y in g.edges:
        if x in pset and y in pset:
            continue
        lx, ly = len(lists[x]), len(lists[y])
        if lx == 2 and ly == 2:
            out.append((x, y))
        elif (x in anchors and y not in pset and ly == 2) or (y in anchors and x not in pset and lx == 2):
            out.append((x, y))
    return out


def bad_4cycles(t: Target) -> list[tuple[int, int, int, int]]:
    g, lists = t.graph, t.lists
    found = set()
    for walk in g.outer_faces:
        n = len(walk)
        if n < 3:
            continue
        for i in range(n):
            x, y, z = walk[i - 1], walk[i], walk[(i + 1) % n]
            if x == z or len(lists[y]) != 2 or len(lists[x]) != 3 or len(lists[z]) != 3:
                continue
            for w in g.neighbours(x):
                if w != y and g.adjacent(w, z) and not g.is_boundary(w) and len(lists[w]) == 3:
                    a, c = min(x, z), max(x, z)
                    found.add((a, y, c, w))
    return sorted(found)


def validity_report(t: Target) -> ValidityReport:
    return ValidityReport(bad_vertices(t), bad_edges(t), bad_4cycles(t))


def is_valid(t: Target) -> bool:
    return not bad_edges(t) and not bad_vertices(t) and not bad_4cycles(t)


# ---------------------------------------------------------------------------
# Chord splits
# ---------------------------------------------------------------------------


def classify_chord(t: Target, w: IChord) -> tuple[int, int, int]:
    a, b = w.ends
    return len(t.lists[a]), len(t.lists[b]), w.length


@dataclass(frozen=True, eq=False)
class ChordSplit:
    """The two sides of a chord ``W`` and the derived path ``P_W``.

    ``u``/``v`` are the chord ends named so that ``u-`` and ``v+`` lie in
    ``g2``; ``p_w`` is ``None`` when the prescribed vertex set is not a single
    path along ``B(g2)``.  ``infeasible_shape`` is 1, 2 or 3 for the three
    infeasible configurations, 0 when none matches.
    """

    chord: IChord
    u: int
    v: int
    g1: PlaneGraph
    g2: PlaneGraph
    p1: tuple[int, ...]
    p_w: tuple[int, ...] | None
    g1_aug: PlaneGraph | None
    feasible: bool
    infeasible_shape: int = 0


def _arc(walk: Sequence[int], a: int, b: int) -> list[int]:
    """Vertices from ``a`` to ``b`` inclusive following ``walk`` cyclically."""
    n = len(walk)
    i = walk.index(a)
    out = [a]
    while walk[i] != b:
        i = (i + 1) % n
        out.append(walk[i])
    return out


def _window(cycle: Sequence[int], verts: set[int]) -> tuple[int, ...] | None:
    """``verts`` as a contiguous proper window of the cyclic sequence, or None."""
    n = len(cycle)
    if not verts or len(verts) >= n:
        return None
    for start in range(n):
        if cycle[start] in verts and cycle[start - 1] not in verts:
            run = []
            i = start
            while cycle[i % n] in verts:
                run.append(cycle[i % n])
                i += 1
            return tuple(run) if len(run) == len(verts) else None
    return None


def _p_part_is_path(p: Sequence[int], part: set[int]) -> bool:
    idx = [i for i, x in enumerate(p) if x in part]
    return not idx or idx == list(range(idx[0], idx[-1] + 1))


def _side_cycles(g: PlaneGraph, w: IChord) -> list[tuple[list[int], list[int]]]:
    walk = g.outer_face
    a, b = w.ends
    inner = list(w.path[1:-1])
    out = []
    for s, e in ((a, b), (b, a)):
        arc = _arc(walk, s, e)
        out.append((arc, arc + inner[::-1] if s == a else arc + inner))
    return out


def chord_sides(t: Target, w: IChord) -> list[tuple[list[int], set[int]]]:
    """The two (arc, vertex set) sides of ``w``; arcs run clockwise end to end."""
    g = t.graph
    return [(arc, set(cyc) | set(cycle_interior(g, cyc))) for arc, cyc in _side_cycles(g, w)]


def chord_split(t: Target, w: IChord, g1_side: int | None = None) -> ChordSplit:
    """Split ``t`` along ``w``.

    Args:
        g1_side: 0 or 1 to force which side becomes ``G_{W,1}``; by default
            the side meeting ``P`` in a boundary path with the most ``P``
            vertices, ties broken toward the smaller ``G_{W,2}``.

    Raises:
        TargetError: ``NOT_A_CHORD``.
    """
    g = t.graph
    if not is_two_connected(g):
        raise EmbeddingError("NOT_TWO_CONNECTED", "chord split needs a 2-connected graph")
    walk = g.outer_face
    bset = set(walk)
    path = w.path
    a, b = w.ends
    n = len(walk)
    if (
        len(path) < 2
        or a not in bset
        or b not in bset
        or any(x in bset for x in path[1:-1])
        or any(not g.adjacent(path[i], path[i + 1]) for i in range(len(path) - 1))
        or (walk.index(a) - walk.index(b)) % n in (1, n - 1)
    ):
        raise TargetError("NOT_A_CHORD", f"{path} is not a chord")
    sides = chord_sides(t, w)
    if g1_side is None:
        scores = []
        for idx, (_, verts) in enumerate(sides):
            part = verts & t.p_set
            ok = _p_part_is_path(t.p, part)
            other = sides[1 - idx][1]
            scores.append((ok, len(part), -len(other), -idx))
        g1_side = max(range(2), key=lambda i: scores[i])
    arc1, v1 = sides[g1_side]
    arc2, v2 = sides[1 - g1_side]
    # arc2 runs clockwise from v to u, so u- and v+ lie on it
    v, u = arc2[0], arc2[-1]
    cycles = _side_cycles(g, w)
    # split_at_cycle keeps chords of the outer walk on their own side
    g1 = split_at_cycle(g, cycles[g1_side][1])[0]
    g2 = split_at_cycle(g, cycles[1 - g1_side][1])[0]
    p1 = tuple(x for x in t.p if x in v1)
    if not _p_part_is_path(t.p, set(p1)):
        p1 = ()
    u_minus, v_plus = arc2[-2], arc2[1]
    want = (set(path) | (t.p_set & v2)) & set(g2.outer_face)
    if len(t.lists[u_minus]) == 2:
        want.add(u_minus)
    if len(t.lists[v_plus]) == 2:
        want.add(v_plus)
    p_w = _window(g2.outer_face, want)
    shape = 0
    if p_w is None:
        g1_aug = None
        feasible = not (v1 | want) >= set(g.vertices)
    else:
        aug = v1 | set(p_w)
        feasible = len(aug) != len(g)
        g1_aug = g.induced(aug) if feasible else g
    if not feasible:
        pset = t.p_set
        if u not in pset and v not in pset and u_minus == v_plus and len(t.lists[v_plus]) == 2:
            shape = 1
        elif u in pset and v in pset and u_minus == v_plus and v_plus in pset:
            shape = 2
        elif (u in pset) != (v in pset):
            shape = 3
    return ChordSplit(w, u, v, g1, g2, p1, p_w, g1_aug, feasible, shape)
