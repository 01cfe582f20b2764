"""Recursive list-colouring engine for valid targets.

Each reduction is a generator: it yields sub-targets and receives their
colourings, then returns a colouring of its own target.  A driver keeps the
pending generators on an explicit stack, so recursion depth is not bounded by
the interpreter.  Reductions are tried in a fixed priority order; one that
cannot produce valid sub-targets raises :class:`_NotApplicable` and the next
is tried.  Every sub-target passes the validity checks before it is handed
down, and the final colouring is re-checked independently.
"""

from __future__ import annotations

import enum
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

from .errors import EngineError, NoColouringError, TargetError
from .oracle import brute_force_colour, is_proper_colouring
from .plane import (
    PlaneGraph,
    SemiFan,
    cut_vertices,
    find_i_chords,
    find_separating_cycles,
    identify_vertices,
    is_two_connected,
    semi_fan_in,
    split_at_cycle,
    suppress_vertex,
)
from .semifan import semi_fan_colour
from .target import Target, chord_split, is_valid, make_target, validity_report

Colouring = dict[int, int]
Lists = dict[int, frozenset]

MAX_REPAIR_DEPTH = 6

# kinds skipped by the candidate generator; only tests touch this
_SKIP: set = set()


class Kind(str, enum.Enum):
    REMOVE_RICH_VERTEX = "REMOVE_RICH_VERTEX"
    CUT_VERTEX_SPLIT = "CUT_VERTEX_SPLIT"
    SEPARATING_CYCLE_SPLIT = "SEPARATING_CYCLE_SPLIT"
    SIX_CYCLE_INTERIOR = "SIX_CYCLE_INTERIOR"
    CHORD_SPLIT = "CHORD_SPLIT"
    SEMI_FAN = "SEMI_FAN"
    IDENTIFY_MERGE = "IDENTIFY_MERGE"
    BOUNDARY_CASE_1 = "BOUNDARY_CASE_1"
    BOUNDARY_CASE_2 = "BOUNDARY_CASE_2"
    BOUNDARY_CASE_3 = "BOUNDARY_CASE_3"
    BOUNDARY_CASE_4 = "BOUNDARY_CASE_4"
    BOUNDARY_CASE_5 = "BOUNDARY_CASE_5"
    BAD_EDGE_REPAIR = "BAD_EDGE_REPAIR"
    A_B_PARTITION = "A_B_PARTITION"
    # beyond the proof's own case list
    PRECOLOUR_PATH = "PRECOLOUR_PATH"
    PATH_SPLIT = "PATH_SPLIT"
    PATH_SHORTCUT = "PATH_SHORTCUT"


_PLANS = {
    Kind.REMOVE_RICH_VERTEX: "colour the rest, then the removed vertices greedily in reverse order",
    Kind.CUT_VERTEX_SPLIT: "colour the side holding P, then the other side with the cut vertex precoloured",
    Kind.SEPARATING_CYCLE_SPLIT: "colour ext[C], then int[C] with C precoloured",
    Kind.SIX_CYCLE_INTERIOR: "colour ext[C], then int[C] minus one cycle vertex",
    Kind.CHORD_SPLIT: "colour G'_{W,1}, then G_{W,2} with P_W precoloured",
    Kind.SEMI_FAN: "colour G'_{W,1}, then the fan by a sweep over the rim",
    Kind.IDENTIFY_MERGE: "colour the merged graph and copy the merged colour to both ends",
    Kind.BOUNDARY_CASE_1: "drop p1 and its colour from neighbours' lists",
    Kind.BOUNDARY_CASE_2: "colour v1, drop it",
    Kind.BOUNDARY_CASE_3: "colour v2 and v1, drop them",
    Kind.BOUNDARY_CASE_4: "identify v1 and v3",
    Kind.BOUNDARY_CASE_5: "colour v3, v2, v1, drop them",
    Kind.BAD_EDGE_REPAIR: "precolour the 2-list end of a bad edge and split at precoloured vertices",
    Kind.A_B_PARTITION: "precolour or remove repair vertices and split at precoloured vertices",
    Kind.PRECOLOUR_PATH: "fix one colour on path vertices",
    Kind.PATH_SPLIT: "colour each part cut off by the precoloured vertices",
    Kind.PATH_SHORTCUT: "replace a degree-2 path vertex by an edge",
}


@dataclass
class ReductionStep:
    kind: Kind
    sub_targets: list[Target] = field(default_factory=list)
    recombine_plan: str = ""


@dataclass
class EngineOutcome:
    colouring: Colouring
    trace: list[Kind]
    fallback_used: bool = False
    nodes: int = 0
    backtracks: int = 0
    seconds: float = 0.0


class _NotApplicable(Exception):
    pass


@dataclass
class _Ctx:
    trace: list[Kind] = field(default_factory=list)
    nodes: int = 0
    backtracks: int = 0
    max_nodes: int = 20000
    root_steps: list[ReductionStep] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Small helpers
# ---------------------------------------------------------------------------


def _single(s: frozenset) -> int:
    (c,) = s
    return c


def _try_target(g: PlaneGraph, p: Sequence[int], lists: Mapping[int, frozenset]) -> Target | None:
    try:
        return make_target(g, p, {v: lists[v] for v in g.vertices})
    except (TargetError, KeyError):
        return None


def _valid_target(g: PlaneGraph, p: Sequence[int], lists: Mapping[int, frozenset]) -> Target | None:
    t = _try_target(g, p, lists)
    return t if t is not None and is_valid(t) else None


def _fixed_nbr_colours(g: PlaneGraph, lists: Mapping[int, frozenset], v: int, fixed: set[int]) -> set[int]:
    return {_single(lists[w]) for w in g.neighbours(v) if w in fixed}


def _colour_and_delete(
    g: PlaneGraph, lists: Mapping[int, frozenset], assign: Mapping[int, int]
) -> tuple[PlaneGraph, Lists] | None:
    """Remove the coloured vertices and their colours from neighbours' lists.

    Returns ``None`` if the assignment clashes with itself, leaves a list
    empty, or uses a colour outside a list.
    """
    for v, c in assign.items():
        if c not in lists[v]:
            return None
        for w in g.neighbours(v):
            if w in assign and assign[w] == c:
                return None
    new = {v: s for v, s in lists.items() if v not in assign and v in g}
    for v, c in assign.items():
        for w in g.neighbours(v):
            if w in new and c in new[w]:
                new[w] = new[w] - {c}
                if not new[w]:
                    return None
    h = g.induced(v for v in g.vertices if v not in assign)
    return h, new


def recombine(step: ReductionStep | None, subs: Sequence[Mapping[int, int]]) -> Colouring:
    """Union of sub-colourings; they must agree wherever they overlap.

    Raises:
        EngineError: ``DISAGREEMENT_ON_SHARED``.
    """
    out: Colouring = {}
    for col in subs:
        for v, c in col.items():
            if v in out and out[v] != c:
                raise EngineError("DISAGREEMENT_ON_SHARED", f"vertex {v}: {out[v]} vs {c}")
            out[v] = c
    return out


def _window_path(g: PlaneGraph, s: set[int]) -> tuple[int, ...] | None:
    """``s`` as consecutive distinct vertices of an outer walk of ``g``."""
    k = len(s)
    if k == 0:
        return ()
    for walk in g.outer_faces:
        n = len(walk)
        if not s <= set(walk):
            continue
        if k == n and len(set(walk)) == n:
            i = walk.index(min(walk))
            return tuple(walk[i:] + walk[:i])
        for off in range(n):
            if walk[off] in s and walk[off - 1] not in s:
                seg = [walk[(off + i) % n] for i in range(k)]
                if set(seg) == s and len(seg) == k:
                    return tuple(seg)
        if k == 1:
            return (next(iter(s)),)
    return None


def _parts(g: PlaneGraph, fixed: set[int]) -> list[set[int]]:
    """Components of ``g - fixed``, each with its neighbours in ``fixed``."""
    seen: set[int] = set()
    parts = []
    for s in g.vertices:
        if s in fixed or s in seen:
            continue
        comp = {s}
        seen.add(s)
        stack = [s]
        att = set()
        while stack:
            v = stack.pop()
            for w in g.neighbours(v):
                if w in fixed:
                    att.add(w)
                elif w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        parts.append(comp | att)
    return parts


def precolour_vertex(t: Target, v: int, forbidden: Sequence[int] = ()) -> Target:
    """Fix ``v`` to its smallest admissible colour.

    Admissible colours avoid ``forbidden`` and the colours of precoloured
    neighbours.  A vertex outside ``P`` that sits next to an end of ``P`` on
    the boundary joins the path.

    Raises:
        EngineError: ``NO_ADMISSIBLE_COLOUR``.
        TargetError: the result is not a target.
    """
    g = t.graph
    fixed = {w for w in g.neighbours(v) if w in t.p_set and len(t.lists[w]) == 1}
    avail = set(t.lists[v]) - set(forbidden) - _fixed_nbr_colours(g, t.lists, v, fixed)
    if not avail:
        raise EngineError("NO_ADMISSIBLE_COLOUR", f"vertex {v}")
    lists = dict(t.lists)
    lists[v] = frozenset({min(avail)})
    p = t.p
    if v not in t.p_set:
        for cand in ((*p, v), (v, *p)):
            nt = _try_target(g, cand, lists)
            if nt is not None:
                return nt
        raise TargetError("P_NOT_BOUNDARY_PATH", f"{v} cannot extend P")
    return make_target(g, p, lists)


# ---------------------------------------------------------------------------
# Settling: split at precoloured vertices and repair bad configurations
# ---------------------------------------------------------------------------


def _settle(g: PlaneGraph, lists: Mapping[int, frozenset], fixed: set[int], ctx: _Ctx, depth: int = 0):
    """Colour ``g`` whose vertices in ``fixed`` have singleton lists."""
    out: Colouring = {v: _single(lists[v]) for v in fixed if v in g}
    for part in _parts(g, fixed):
        pg = g if len(part) == len(g) else g.induced(part)
        path = _window_path(pg, part & fixed)
        if path is None or len(path) > 5:
            col = _degenerate_part(pg, lists, part & fixed)
            if col is None:
                raise _NotApplicable
            out.update(col)
            continue
        sub = _try_target(pg, path, lists)
        if sub is None:
            raise _NotApplicable
        rep = validity_report(sub)
        if rep.is_valid:
            col = yield sub
        else:
            if depth >= MAX_REPAIR_DEPTH:
                raise _NotApplicable
            col = yield from _repair(sub, rep, ctx, depth)
        out.update(col)
    return out


def _degenerate_part(g: PlaneGraph, lists, fixed: set[int]) -> Colouring | None:
    """Colour ``g - fixed`` greedily if every vertex can be peeled."""
    rest = [v for v in g.vertices if v not in fixed]
    avail = {v: set(lists[v]) - {_single(lists[w]) for w in g.neighbours(v) if w in fixed} for v in rest}
    deg = {v: sum(1 for w in g.neighbours(v) if w not in fixed) for v in rest}
    order = []
    done: set[int] = set()
    stack = [v for v in rest if len(avail[v]) > deg[v]]
    while stack:
        v = stack.pop()
        if v in done:
            continue
        done.add(v)
        order.append(v)
        for w in g.neighbours(v):
            if w in deg and w not in done:
                deg[w] -= 1
                if len(avail[w]) > deg[w]:
                    stack.append(w)
    if len(order) != len(rest):
        return None
    col: Colouring = {}
    for v in reversed(order):
        used = {col[w] for w in g.neighbours(v) if w in col}
        col[v] = min(avail[v] - used)
    return col


def _solve(g: PlaneGraph, p: Sequence[int], lists, ctx: _Ctx):
    """Colour ``(g, p, lists)``, repairing it first if it is not valid.

    ``p`` must already be precoloured.
    """
    sub = _try_target(g, p, lists)
    if sub is not None and is_valid(sub):
        return (yield sub)
    return (yield from _settle(g, lists, set(p), ctx))


def _attempt(ctx: _Ctx, kind: Kind, gen):
    """Run a sub-generator as one traced alternative."""
    mark = len(ctx.trace)
    ctx.trace.append(kind)
    try:
        return (yield from gen)
    except _NotApplicable:
        del ctx.trace[mark:]
        ctx.backtracks += 1
        raise


def _repair(t: Target, rep, ctx: _Ctx, depth: int):
    g, lists, pset = t.graph, t.lists, set(t.p)
    fixed = set(pset)

    # bad edge at the path: precolour its 2-list end
    for x, y in rep.bad_edges:
        for a, b in ((x, y), (y, x)):
            if a in pset and b not in pset and len(lists[b]) == 2:
                for c in sorted(lists[b] - _fixed_nbr_colours(g, lists, b, fixed)):
                    new = dict(lists)
                    new[b] = frozenset({c})
                    try:
                        return (yield from _attempt(ctx, Kind.BAD_EDGE_REPAIR, _settle(g, new, fixed | {b}, ctx, depth + 1)))
                    except _NotApplicable:
                        pass
                raise _NotApplicable
    if rep.bad_edges:
        raise _NotApplicable

    # bad vertex with one spare colour: that colour is forced
    for v in rep.bad_vertices:
        used = _fixed_nbr_colours(g, lists, v, fixed)
        avail = lists[v] - used
        if len(avail) != 1:
            raise _NotApplicable
        new = dict(lists)
        new[v] = frozenset(avail)
        return (yield from _attempt(ctx, Kind.A_B_PARTITION, _settle(g, new, fixed | {v}, ctx, depth + 1)))

    # bad 4-cycle: settle its 2-list boundary vertex
    for x, y, z, w in rep.bad_4cycles:
        for c in sorted(lists[y] - _fixed_nbr_colours(g, lists, y, fixed)):
            res = _colour_and_delete(g, lists, {y: c})
            if res is not None:
                h, new = res
                try:
                    col = yield from _attempt(ctx, Kind.A_B_PARTITION, _settle(h, new, fixed, ctx, depth + 1))
                    col[y] = c
                    return col
                except _NotApplicable:
                    pass
            new = dict(lists)
            new[y] = frozenset({c})
            try:
                return (yield from _attempt(ctx, Kind.A_B_PARTITION, _settle(g, new, fixed | {y}, ctx, depth + 1)))
            except _NotApplicable:
                pass
        raise _NotApplicable
    raise _NotApplicable


# ---------------------------------------------------------------------------
# Reductions
# ---------------------------------------------------------------------------


def _precolour_path(t: Target, ctx: _Ctx):
    lists = dict(t.lists)
    for p in t.p:
        lists[p] = frozenset({min(lists[p])})
    sub = _valid_target(t.graph, t.p, lists)
    if sub is None:
        raise _NotApplicable
    return (yield sub)


def _greedy_extend(g: PlaneGraph, lists, col: Colouring, order: Sequence[int]) -> Colouring:
    for v in reversed(order):
        used = {col[w] for w in g.neighbours(v) if w in col}
        col[v] = min(c for c in lists[v] if c not in used)
    return col


def _peel(g: PlaneGraph, lists, pset) -> list[int]:
    deg = {v: g.degree(v) for v in g.vertices}
    gone: set[int] = set()
    order = []
    stack = [v for v in g.vertices if v not in pset and len(lists[v]) > deg[v]]
    while stack:
        v = stack.pop()
        if v in gone:
            continue
        gone.add(v)
        order.append(v)
        for w in g.neighbours(v):
            if w not in gone:
                deg[w] -= 1
                if w not in pset and len(lists[w]) > deg[w]:
                    stack.append(w)
    return order


def _remove_rich(t: Target, ctx: _Ctx, order: list[int]):
    g = t.graph
    gone = set(order)
    rest = g.induced(v for v in g.vertices if v not in gone)
    if not len(rest):
        return _greedy_extend(g, t.lists, {}, order)
    sub = _valid_target(rest, t.p, t.lists)
    if sub is not None:
        col = yield sub
        return _greedy_extend(g, t.lists, dict(col), order)
    for v in sorted(gone):
        if len(t.lists[v]) <= g.degree(v):
            continue
        one = g.induced(w for w in g.vertices if w != v)
        sub = _valid_target(one, t.p, t.lists)
        if sub is not None:
            col = yield sub
            return _greedy_extend(g, t.lists, dict(col), [v])
    col = yield from _settle(rest, t.lists, set(t.p), ctx)
    return _greedy_extend(g, t.lists, dict(col), order)


def _path_split(t: Target, ctx: _Ctx):
    col = yield from _settle(t.graph, t.lists, set(t.p), ctx, MAX_REPAIR_DEPTH)
    return col


def _cut_vertex_split(t: Target, ctx: _Ctx, c: int):
    g = t.graph
    rest = g.induced(v for v in g.vertices if v != c)
    comps = rest.components
    if t.p:
        home = next(comp for comp in comps if t.p[0] in comp)
    else:
        home = min(comps, key=min)
    side1 = set(home) | {c}
    g1 = g.induced(side1)
    if _try_target(g1, t.p, t.lists) is None:
        raise _NotApplicable
    side2 = (set(g.vertices) - side1) | {c}
    g2 = g.induced(side2)
    # check the second side structurally before colouring the first
    probe = dict(t.lists)
    probe[c] = frozenset({-1})
    if _try_target(g2, (c,), probe) is None:
        raise _NotApplicable
    phi = yield from _solve(g1, t.p, t.lists, ctx)
    lists2 = dict(t.lists)
    lists2[c] = frozenset({phi[c]})
    psi = yield from _solve(g2, (c,), lists2, ctx)
    return recombine(None, [phi, psi])


def _precolour_boundary(t: Target, ctx: _Ctx, b: int, c: int):
    lists = dict(t.lists)
    lists[b] = frozenset({c})
    sub = _valid_target(t.graph, (b,), lists)
    if sub is None:
        raise _NotApplicable
    return (yield sub)


def _path_shortcut(t: Target, ctx: _Ctx, i: int):
    g, p = t.graph, t.p
    try:
        h = suppress_vertex(g, p[i])
    except Exception:
        raise _NotApplicable
    newp = p[:i] + p[i + 1 :]
    sub = _valid_target(h, newp, t.lists)
    if sub is None:
        raise _NotApplicable
    col = yield sub
    col = dict(col)
    col[p[i]] = _single(t.lists[p[i]])
    return col


def _separating_cycle(t: Target, ctx: _Ctx, cyc: tuple[int, ...], inner: frozenset[int]):
    g = t.graph
    closed, ext = split_at_cycle(g, cyc)
    if _try_target(ext, t.p, t.lists) is None:
        raise _NotApplicable
    phi = yield from _solve(ext, t.p, t.lists, ctx)
    l = len(cyc)
    if l <= 5:
        lists = dict(t.lists)
        for v in cyc:
            lists[v] = frozenset({phi[v]})
        try:
            psi = yield from _settle(closed, lists, set(cyc), ctx)
            return recombine(None, [phi, psi])
        except _NotApplicable:
            pass
    for x in cyc:
        lists = dict(t.lists)
        for v in cyc:
            lists[v] = frozenset({phi[v]})
        res = _colour_and_delete(closed, lists, {x: phi[x]})
        if res is None:
            continue
        h, new = res
        try:
            psi = yield from _settle(h, new, set(cyc) - {x}, ctx)
            return recombine(None, [phi, psi])
        except _NotApplicable:
            continue
    raise _NotApplicable


def _chord_candidates(t: Target) -> list:
    g = t.graph
    found = []
    seen = set()
    for i in range(1, 5):
        for w in find_i_chords(g, i):
            for side in (0, 1):
                try:
                    cs = chord_split(t, w, side)
                except (TargetError, ValueError):
                    continue
                if not cs.feasible or cs.p_w is None or len(cs.p_w) > 5 or cs.g1_aug is None:
                    continue
                if len(cs.g2) >= len(g) or len(cs.g1_aug) >= len(g):
                    continue
                aug = set(cs.g1_aug.vertices)
                p1 = tuple(x for x in t.p if x in aug)
                idx = [t.p.index(x) for x in p1]
                if idx and idx != list(range(idx[0], idx[-1] + 1)):
                    continue
                key = (frozenset(cs.g2.vertices), cs.p_w)
                if key in seen:
                    continue
                seen.add(key)
                # structural probe of the second side with placeholder colours
                probe = dict(t.lists)
                for j, x in enumerate(cs.p_w):
                    probe[x] = frozenset({-1 - j})
                pt = _try_target(cs.g2, cs.p_w, probe)
                if pt is None:
                    continue
                rep = validity_report(pt)
                if rep.bad_edges or rep.bad_4cycles:
                    continue
                found.append((len(cs.g2), i, w.path, side, cs, p1))
    found.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    return found


def _chord(t: Target, ctx: _Ctx, cs, p1):
    if _try_target(cs.g1_aug, p1, t.lists) is None:
        raise _NotApplicable
    phi = yield from _solve(cs.g1_aug, p1, t.lists, ctx)
    lists = dict(t.lists)
    for x in cs.p_w:
        lists[x] = frozenset({phi[x]})
    psi = yield from _settle(cs.g2, lists, set(cs.p_w), ctx)
    return recombine(None, [phi, psi])


def _fan_of(g2: PlaneGraph, u: int, v: int, w: int) -> SemiFan | None:
    h = g2.induced(x for x in g2.vertices if x != v)
    for x in h.vertices:
        if x in (u, w) or not (h.adjacent(x, u) and h.adjacent(x, w)):
            continue
        rim = [u]
        prev = None
        cur = u
        ok = True
        while cur != w:
            nxt = [y for y in h.neighbours(cur) if y != x and y != prev]
            if len(nxt) != 1:
                ok = False
                break
            prev, cur = cur, nxt[0]
            rim.append(cur)
            if len(rim) > len(h):
                ok = False
                break
        if not ok or len(rim) + 1 != len(h) or len(rim) % 2 == 0:
            continue
        if semi_fan_in(h, x, rim):
            return SemiFan(x, tuple(rim))
    return None


def _semi_fan(t: Target, ctx: _Ctx, cs, p1, fan: SemiFan, mid: int):
    if _try_target(cs.g1_aug, p1, t.lists) is None:
        raise _NotApplicable
    phi = yield from _solve(cs.g1_aug, p1, t.lists, ctx)
    g = t.graph
    coloured = set(phi)
    verts = [fan.center, *fan.rim]
    lists = {}
    for y in verts:
        if y in coloured:
            lists[y] = {phi[y]}
        else:
            lists[y] = set(t.lists[y]) - {phi[z] for z in g.neighbours(y) if z in coloured}
    skip = [(a, b) for a in verts for b in g.neighbours(a) if a in coloured and b in coloured]
    try:
        psi = semi_fan_colour(fan, lists, excluded_center_companion=mid, excluded_edges=skip)
    except NoColouringError:
        raise _NotApplicable
    return recombine(None, [phi, psi])


def _orientations(t: Target):
    """Yield ``(p, v)`` with ``p[0] = p1`` and boundary ``pk..p1 v1..vs``."""
    walk = list(t.graph.outer_face)
    pset = t.p_set
    k = t.k
    for seq in (walk, walk[::-1]):
        n = len(seq)
        start = next((i for i in range(n) if seq[i] in pset and seq[i - 1] not in pset), None)
        if start is None:
            continue
        block = [seq[(start + j) % n] for j in range(k)]
        if set(block) != pset:
            continue
        rest = [seq[(start + k + j) % n] for j in range(n - k)]
        yield block[::-1], rest


def _strip_settle(t: Target, ctx: _Ctx, assign: Mapping[int, int], fixed: set[int]):
    res = _colour_and_delete(t.graph, t.lists, assign)
    if res is None:
        raise _NotApplicable
    h, new = res
    col = yield from _settle(h, new, fixed, ctx)
    col = dict(col)
    col.update(assign)
    return col


def _boundary_cases(t: Target, ctx: _Ctx, relaxed: bool) -> Iterator[tuple[Kind, Callable]]:
    g, L = t.graph, t.lists
    pset = t.p_set
    for p, v in _orientations(t):
        s = len(v)
        p1, pk = p[0], p[-1]
        c_p1 = set(L[p1])
        c_pk = set(L[pk])

        def admissible(x: int, extra: set[int], taken: Mapping[int, int]) -> list[int]:
            bad = set(extra)
            for y in g.neighbours(x):
                if y in pset:
                    bad |= L[y]
                elif y in taken:
                    bad.add(taken[y])
            return sorted(set(L[x]) - bad)

        lv = [L[x] for x in v]
        # Case 1
        if relaxed or s == 0 or (s >= 2 and len(lv[1]) >= 3):
            def case1(p=p, p1=p1):
                fixed = set(p[1:])
                res = _colour_and_delete(g, L, {p1: _single(L[p1])})
                if res is None:
                    raise _NotApplicable
                h, new = res
                # p1 keeps its colour; path edges carry no constraint
                for y in g.neighbours(p1):
                    if y in pset and y in new:
                        new[y] = L[y]
                col = yield from _settle(h, new, fixed, ctx)
                col = dict(col)
                col[p1] = _single(L[p1])
                return col

            yield Kind.BOUNDARY_CASE_1, case1
        if s == 0:
            continue
        v1 = v[0]
        # Case 2
        if relaxed or s == 1 or (len(lv[1]) == 2 and lv[0] - (lv[1] | c_p1)):
            extra = (c_p1 | c_pk) if s == 1 else (set(lv[1]) | c_p1)
            for c in admissible(v1, extra, {}):
                yield Kind.BOUNDARY_CASE_2, (lambda c=c, v1=v1: _strip_settle(t, ctx, {v1: c}, set(pset)))
        if s < 2:
            continue
        v2 = v[1]
        # Case 3
        if relaxed or s == 2 or (s >= 3 and not lv[1] <= lv[2]) or (s >= 5 and len(lv[3]) >= 3):
            if s == 2:
                extra2 = c_pk
            elif not lv[1] <= lv[2]:
                extra2 = set(lv[2])
            else:
                extra2 = set()
            for c2 in admissible(v2, extra2, {}):
                for c1 in admissible(v1, c_p1 | {c2}, {}):
                    yield Kind.BOUNDARY_CASE_3, (
                        lambda c1=c1, c2=c2, v1=v1, v2=v2: _strip_settle(t, ctx, {v1: c1, v2: c2}, set(pset))
                    )
                    break
        if s < 3:
            continue
        v3 = v[2]
        common = (set(g.neighbours(v1)) & set(g.neighbours(v3))) - {v2}
        # Cases 3(i) and 4: identify v1 and v3 through the face at v2
        if common and lv[1] <= (lv[0] & lv[2]) and len(L[p1]) == 1:
            kind = Kind.BOUNDARY_CASE_4 if lv[0] == (lv[1] | L[p1]) else Kind.IDENTIFY_MERGE
            yield kind, (lambda v1=v1, v2=v2, v3=v3, p1=p1: _identify(t, ctx, v1, v2, v3, p1))
        # Case 5
        if relaxed or not common:
            extra3 = set(lv[3]) if s >= 4 else c_pk
            for c3 in admissible(v3, extra3, {}):
                for c2 in admissible(v2, {c3}, {}):
                    for c1 in admissible(v1, c_p1 | {c2}, {}):
                        yield Kind.BOUNDARY_CASE_5, (
                            lambda a=(v1, c1, v2, c2, v3, c3): _strip_settle(
                                t, ctx, {a[0]: a[1], a[2]: a[3], a[4]: a[5]}, set(pset)
                            )
                        )
                        break
                    break


def _identify(t: Target, ctx: _Ctx, v1: int, v2: int, v3: int, p1: int):
    g, L = t.graph, t.lists
    try:
        h = identify_vertices(g, v1, v3, via=v2, inner_only=True)
    except Exception:
        raise _NotApplicable
    lists = {x: L[x] for x in h.vertices}
    lists[v1] = frozenset(L[v2] | L[p1])
    psi = yield from _settle(h, lists, set(t.p), ctx)
    psi = dict(psi)
    c = psi[v1]
    if c not in L[v1] or c not in L[v3]:
        raise _NotApplicable
    psi[v3] = c
    return psi


def _extend_path(t: Target, ctx: _Ctx):
    g, L = t.graph, t.lists
    pset = set(t.p)
    for p, v in _orientations(t):
        if not v:
            continue
        for x in (v[0], v[-1]):
            for c in sorted(L[x] - _fixed_nbr_colours(g, L, x, pset)):
                new = dict(L)
                new[x] = frozenset({c})

                def run(new=new, x=x):
                    return _settle(g, new, pset | {x}, ctx)

                yield Kind.PRECOLOUR_PATH, run
        break


def _candidates(t: Target, ctx: _Ctx) -> Iterator[tuple[Kind, Callable]]:
    g, L = t.graph, t.lists
    pset = t.p_set
    if any(len(L[p]) > 1 for p in t.p):
        yield Kind.PRECOLOUR_PATH, lambda: _precolour_path(t, ctx)
        return
    order = _peel(g, L, pset)
    if order:
        yield Kind.REMOVE_RICH_VERTEX, lambda: _remove_rich(t, ctx, order)
    parts = _parts(g, set(pset))
    if len(parts) != 1 or len(parts[0]) != len(g):
        yield Kind.PATH_SPLIT, lambda: _path_split(t, ctx)
    if g.is_connected:
        for c in cut_vertices(g):
            if c not in pset:
                yield Kind.CUT_VERTEX_SPLIT, (lambda c=c: _cut_vertex_split(t, ctx, c))
    if not t.p:
        boundary = sorted(set(g.outer_face))
        for b in boundary[:2]:
            for c in sorted(L[b]):
                yield Kind.PRECOLOUR_PATH, (lambda b=b, c=c: _precolour_boundary(t, ctx, b, c))
        return
    for i in range(1, t.k - 1):
        if g.degree(t.p[i]) == 2:
            yield Kind.PATH_SHORTCUT, (lambda i=i: _path_shortcut(t, ctx, i))
    if not is_two_connected(g):
        return
    for length, kind in ((4, Kind.SEPARATING_CYCLE_SPLIT), (5, Kind.SEPARATING_CYCLE_SPLIT), (6, Kind.SIX_CYCLE_INTERIOR)):
        regions = [r for r in find_separating_cycles(g, length) if len(r.interior_vertices) + length < len(g)]
        regions.sort(key=lambda r: (len(r.interior_vertices), r.cycle))
        for r in regions:
            yield kind, (lambda r=r: _separating_cycle(t, ctx, r.cycle, r.interior_vertices))
    chords = _chord_candidates(t)
    for _, i, path, side, cs, p1 in chords:
        yield Kind.CHORD_SPLIT, (lambda cs=cs, p1=p1: _chord(t, ctx, cs, p1))
    for _, i, path, side, cs, p1 in chords:
        if i != 2:
            continue
        a, mid, b = path
        sizes = sorted((len(L[a]), len(L[b])))
        if sizes[0] < 3 or 3 not in sizes:
            continue
        fan = _fan_of(cs.g2, cs.u, mid, cs.v)
        if fan is not None:
            yield Kind.SEMI_FAN, (lambda cs=cs, p1=p1, fan=fan, mid=mid: _semi_fan(t, ctx, cs, p1, fan, mid))
    yield from _boundary_cases(t, ctx, relaxed=False)
    if t.k <= 4:
        yield from _extend_path(t, ctx)
    yield from _boundary_cases(t, ctx, relaxed=True)


def _node(t: Target, ctx: _Ctx, root: bool = False):
    ctx.nodes += 1
    if ctx.nodes > ctx.max_nodes:
        raise _NotApplicable
    g, L = t.graph, t.lists
    if all(v in t.p_set for v in g.vertices):
        return {v: min(L[v]) for v in g.vertices}
    for kind, make in _candidates(t, ctx):
        if kind in _SKIP:
            continue
        mark = len(ctx.trace)
        ctx.trace.append(kind)
        subs: list[Target] = []
        gen = make()
        try:
            value = None
            while True:
                sub = gen.send(value)
                subs.append(sub)
                value = yield sub
        except StopIteration as stop:
            if root:
                ctx.root_steps.append(ReductionStep(kind, subs, _PLANS[kind]))
            return stop.value
        except _NotApplicable:
            del ctx.trace[mark:]
            ctx.backtracks += 1
            continue
    raise _NotApplicable


def _drive(t: Target, ctx: _Ctx) -> Colouring:
    stack = [(_node(t, ctx, root=True), t)]
    value = None
    exc: Exception | None = None
    while True:
        gen, tgt = stack[-1]
        try:
            if exc is not None:
                e, exc = exc, None
                sub = gen.throw(e)
            else:
                sub = gen.send(value)
        except StopIteration as stop:
            stack.pop()
            if not stack:
                return stop.value
            value = stop.value
            continue
        except _NotApplicable:
            stack.pop()
            if not stack:
                raise
            exc = _NotApplicable()
            continue
        if not sub.measure() < tgt.measure():
            raise EngineError("NO_PROGRESS", f"{sub!r} not smaller than {tgt!r}")
        stack.append((_node(sub, ctx), sub))
        value = None


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def _archive(t: Target, reason: str, directory: str | None) -> str | None:
    directory = directory or os.environ.get("TFPLC_DISCREPANCY_DIR")
    if not directory:
        return None
    from .io import format_instance

    os.makedirs(directory, exist_ok=True)
    stamp = f"{time.time_ns()}-{os.getpid()}"
    path = os.path.join(directory, f"discrepancy-{stamp}.tgt")
    with open(path, "w") as fh:
        fh.write(f"# {reason}\n")
        fh.write(format_instance(t))
    return path


def fallback_brute(t: Target, archive_dir: str | None = None, reason: str = "fallback") -> Colouring:
    """Colour ``t`` with the oracle's backtracker and archive the instance.

    Raises:
        NoColouringError: the target has no colouring.
    """
    _archive(t, reason, archive_dir)
    col = brute_force_colour(t.graph, t.lists, t.p_edges)
    if col is None:
        raise NoColouringError(f"no colouring for {t!r}")
    return col


def colour_target(
    t: Target,
    allow_fallback: bool = True,
    archive_dir: str | None = None,
    max_nodes: int = 20000,
    check_valid: bool = True,
) -> EngineOutcome:
    """Colour a valid target.

    Raises:
        EngineError: ``INVALID_TARGET``; ``INTERNAL_NO_REDUCTION`` when no
            reduction succeeds and fallback is disabled; ``UNSOUND`` if the
            produced colouring fails the independent check.
    """
    t0 = time.perf_counter()
    if check_valid:
        rep = validity_report(t)
        if not rep.is_valid:
            raise EngineError("INVALID_TARGET", str(rep.to_dict()))
    ctx = _Ctx(max_nodes=max_nodes)
    fallback = False
    try:
        col = _drive(t, ctx)
    except _NotApplicable:
        if not allow_fallback:
            raise EngineError("INTERNAL_NO_REDUCTION", repr(t))
        col = fallback_brute(t, archive_dir, "INTERNAL_NO_REDUCTION")
        fallback = True
        ctx.trace = []
    col = {v: col[v] for v in t.graph.vertices}
    if not is_proper_colouring(t.graph, t.lists, col, t.p_edges):
        raise EngineError("UNSOUND", f"engine produced an improper colouring for {t!r}")
    return EngineOutcome(col, list(ctx.trace), fallback, ctx.nodes, ctx.backtracks, time.perf_counter() - t0)


def apply_reduction(t: Target) -> ReductionStep:
    """The first reduction that succeeds on ``t``, with the sub-targets it produced.

    Raises:
        EngineError: ``INTERNAL_NO_REDUCTION``.
    """
    ctx = _Ctx()
    try:
        _drive(t, ctx)
    except _NotApplicable:
        raise EngineError("INTERNAL_NO_REDUCTION", repr(t))
    if not ctx.root_steps:
        raise EngineError("INTERNAL_NO_REDUCTION", "target is already fully precoloured")
    return ctx.root_steps[0]
