"""Random valid targets and engine-versus-oracle fuzzing."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay

from .engine import _peel, colour_target
from .errors import EngineError, NoColouringError, TargetError
from .oracle import brute_force_colour, is_proper_colouring
from .plane import PlaneGraph, _trace_faces, build_plane_graph
from .target import Target, make_target, validity_report


def random_plane_graph(n: int, rng: np.random.Generator, dense: bool = True) -> PlaneGraph:
    """A connected triangle-free straight-line plane graph on ``n`` vertices.

    Starts from a Delaunay triangulation of random points.  With ``dense``
    adjacent triangles are first paired up and merged into quadrilaterals;
    then a random edge of every remaining triangle is deleted.  Vertices are
    ``1..n``.
    """
    return random_drawing(n, rng, dense)[0]


def random_drawing(
    n: int, rng: np.random.Generator, dense: bool = True
) -> tuple[PlaneGraph, dict[int, tuple[float, float]]]:
    """Like :func:`random_plane_graph`, also returning the vertex positions
    of the straight-line drawing."""
    if n <= 3:
        rot = {i: tuple(j for j in (i + 1, i - 1) if 1 <= j <= n) for i in range(1, n + 1)}
        return build_plane_graph(rot), {i: (float(i), 0.0) for i in range(1, n + 1)}
    pts = rng.random((n, 2))
    tri = Delaunay(pts, qhull_options="QJ")
    adj: dict[int, set[int]] = {i: set() for i in range(n)}
    for s in tri.simplices:
        for a in range(3):
            u, v = int(s[a]), int(s[(a + 1) % 3])
            adj[u].add(v)
            adj[v].add(u)
    if dense:
        # pair up adjacent triangles and delete their shared edge
        tris = [tuple(sorted(int(x) for x in t)) for t in tri.simplices]
        merged = [False] * len(tris)
        for i in rng.permutation(len(tris)).tolist():
            if merged[i]:
                continue
            for j in rng.permutation(3).tolist():
                nb = int(tri.neighbors[i][j])
                if nb >= 0 and not merged[nb]:
                    u, v = (x for x in tris[i] if x != int(tri.simplices[i][j]))
                    adj[u].discard(v)
                    adj[v].discard(u)
                    merged[i] = merged[nb] = True
                    break
    edges = sorted((u, v) for u in adj for v in adj[u] if u < v)
    for i in rng.permutation(len(edges)):
        u, v = edges[i]
        if v in adj[u] and adj[u] & adj[v]:
            adj[u].discard(v)
            adj[v].discard(u)
    # clockwise = decreasing angle
    rot = {}
    for u in range(n):
        x0, y0 = pts[u]
        nb = sorted(adj[u], key=lambda w: -math.atan2(pts[w][1] - y0, pts[w][0] - x0))
        rot[u + 1] = tuple(w + 1 for w in nb)
    g = PlaneGraph(rot, [(1, rot[1][0])])
    areas = []
    for walk in g.faces:
        a = 0.0
        for j in range(len(walk)):
            p, q = pts[walk[j] - 1], pts[walk[(j + 1) % len(walk)] - 1]
            a += p[0] * q[1] - q[0] * p[1]
        areas.append(a)
    # with clockwise rotations inner faces have positive signed area
    outer = g.faces[min(range(len(areas)), key=areas.__getitem__)]
    pos = {u + 1: (float(pts[u][0]), float(pts[u][1])) for u in range(n)}
    return build_plane_graph(rot, outer), pos


def _insert_after(rot: dict[int, tuple[int, ...]], v: int, after: int, new: int) -> None:
    nb = list(rot[v])
    nb.insert(nb.index(after) + 1, new)
    rot[v] = tuple(nb)


def random_quadrangulation(n: int, rng: np.random.Generator) -> PlaneGraph:
    """A random 2-connected plane quadrangulation on about ``n`` vertices.

    Grows from the cube by two face operations: joining a new vertex to two
    opposite corners, or nesting a new 4-cycle inside a face with one spoke
    per corner.  The outer face is a random face.
    """
    rot: dict[int, tuple[int, ...]] = {
        1: (2, 4, 5), 2: (3, 1, 6), 3: (4, 2, 7), 4: (1, 3, 8),
        5: (8, 6, 1), 6: (5, 7, 2), 7: (6, 8, 3), 8: (7, 5, 4),
    }
    while len(rot) < n:
        faces = _trace_faces(rot)[1]
        a, b, c, d = (dart[0] for dart in faces[int(rng.integers(len(faces)))])
        if rng.random() < 0.35 or n - len(rot) < 4:
            x = max(rot) + 1
            i = int(rng.integers(2))
            a, b, c, d = (a, b, c, d) if i == 0 else (b, c, d, a)
            _insert_after(rot, a, d, x)
            _insert_after(rot, c, b, x)
            rot[x] = (a, c)
        else:
            base = max(rot) + 1
            ring = [base, base + 1, base + 2, base + 3]
            corners = [a, b, c, d]
            for j, v in enumerate(corners):
                _insert_after(rot, v, corners[j - 1], ring[j])
            for j, v in enumerate(ring):
                rot[v] = (corners[j], ring[j - 1], ring[(j + 1) % 4])
    _, faces, _ = _trace_faces(rot)
    outer = tuple(d[0] for d in faces[int(rng.integers(len(faces)))])
    return build_plane_graph(rot, outer)


def random_grid(n: int, rng: np.random.Generator) -> PlaneGraph:
    """A ``r x c`` square grid with ``r * c <= n``, outer face the rim.

    Interior vertices have degree 4 and rim vertices degree 3 (corners 2), so
    no vertex is removable for having a long list.
    """
    shapes = [(r, c) for r in range(2, n + 1) for c in range(r, n + 1) if r * c <= n]
    r, c = shapes[int(rng.integers(len(shapes)))]

    def vid(i: int, j: int) -> int:
        return i * c + j + 1

    rot = {}
    for i in range(r):
        for j in range(c):
            # counter-clockwise in (row, col) coordinates, i.e. clockwise on screen
            nb = []
            for di, dj in ((0, 1), (1, 0), (0, -1), (-1, 0)):
                a, b = i + di, j + dj
                if 0 <= a < r and 0 <= b < c:
                    nb.append(vid(a, b))
            rot[vid(i, j)] = tuple(nb)
    _, faces, _ = _trace_faces(rot)
    outer = max((tuple(d[0] for d in f) for f in faces), key=len)
    return build_plane_graph(rot, outer)


def _boundary_path(g: PlaneGraph, k: int, rng: np.random.Generator) -> tuple[int, ...]:
    if k == 0:
        return ()
    walk = g.outer_face
    n = len(walk)
    for _ in range(20):
        s = int(rng.integers(n))
        seg = tuple(walk[(s + i) % n] for i in range(k))
        if len(set(seg)) == k and k <= n:
            return seg
    return (walk[0],)


def _repair_lists(t: Target, lists: dict[int, set[int]], universe: int) -> bool:
    """Enlarge or swap lists until the target is valid; False if stuck."""
    for _ in range(4 * len(lists) + 10):
        try:
            t = make_target(t.graph, t.p, lists)
        except TargetError:
            return False
        rep = validity_report(t)
        if rep.is_valid:
            return True
        pset = t.p_set
        if rep.bad_edges:
            x, y = rep.bad_edges[0]
            v = y if y not in pset else x
            if len(lists[v]) >= 4:
                return False
            lists[v].add(min(set(range(1, universe + 1)) - lists[v]))
        elif rep.bad_4cycles:
            y = rep.bad_4cycles[0][1]
            lists[y].add(min(set(range(1, universe + 1)) - lists[y]))
        else:
            u = rep.bad_vertices[0]
            union = set().union(*(lists[x] for x in t.graph.neighbours(u) if x in pset))
            spare = sorted(set(range(1, universe + 1)) - union - lists[u])
            inside = sorted(lists[u] & union)
            if not spare or not inside:
                return False
            lists[u].discard(inside[0])
            lists[u].add(spare[0])
    return False


def random_target(
    n: int,
    rng: np.random.Generator,
    universe: int = 7,
    precoloured: bool = True,
    k: int | None = None,
    tight: bool = False,
    core: bool = False,
    family: str = "delaunay",
    valid: bool = True,
) -> Target:
    """A random valid target on ``n`` vertices (retrying as needed).

    With ``valid=False`` the lists are left as drawn, so the target is
    well-formed but may have bad vertices, edges or 4-cycles.

    ``tight`` favours 2-lists on the boundary and 3-lists inside, which makes
    the easy peeling reduction rarely applicable.  ``core`` goes further and
    keeps only what survives repeated deletion of vertices whose list is
    longer than their degree, so the result has about ``n`` vertices or
    fewer.  ``family`` is ``"delaunay"``, ``"quad"`` (random
    quadrangulations, whose vertices mostly have degree at least 3) or
    ``"grid"``.
    """
    s_prob = 0.95 if tight else 0.6
    sizes = [2, 2, 2, 3] if tight else [2, 2, 3, 3, 4]
    attempts = 0
    while True:
        attempts += 1
        if family == "quad":
            g = random_quadrangulation(n, rng)
        elif family == "grid":
            g = random_grid(n, rng)
        else:
            g = random_plane_graph(n, rng)
        kk = int(rng.integers(0, 6)) if k is None else k
        p = _boundary_path(g, min(kk, len(g.outer_face)), rng)
        pset = set(p)
        boundary = g.boundary_vertices
        interior = [v for v in g.vertices if v not in boundary]
        s: set[int] = set()
        order = rng.permutation(interior).tolist() if interior else []
        if tight:
            order.sort(key=g.degree)
        for v in order:
            if rng.random() < s_prob and not any(w in s for w in g.neighbours(v)):
                s.add(v)
        lists: dict[int, set[int]] = {}
        for v in g.vertices:
            if v in pset:
                size = 1 if precoloured else int(rng.integers(1, 4))
            elif v in boundary:
                size = int(rng.choice(sizes))
            else:
                size = 3 if v in s else 4
            lists[v] = set((rng.choice(universe, size, replace=False) + 1).tolist())
        try:
            t = make_target(g, p, lists)
        except TargetError:
            continue
        if not valid:
            return t
        if not _repair_lists(t, lists, universe):
            continue
        t = make_target(g, p, lists)
        if not core or attempts > 30:
            return t
        gone = set(_peel(g, t.lists, t.p_set))
        keep = [v for v in g.vertices if v not in gone]
        if len(keep) < 4:
            continue
        h = g.induced(keep)
        comp = max(h.components, key=lambda c: (set(p) <= set(c), len(c)))
        h = h.induced(comp) if len(comp) < len(h) else h
        lists = {v: set(lists[v]) for v in h.vertices}
        try:
            t = make_target(h, p, lists)
        except TargetError:
            continue
        if _repair_lists(t, lists, universe):
            return make_target(h, p, lists)


@dataclass
class FuzzReport:
    count: int = 0
    fallbacks: int = 0
    mismatches: list[str] = field(default_factory=list)
    kinds: dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0
    max_n: int = 0

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "fallbacks": self.fallbacks,
            "mismatches": self.mismatches,
            "kinds": dict(sorted(self.kinds.items())),
            "seconds": round(self.seconds, 3),
            "max_n": self.max_n,
        }


def fuzz(count: int, seed: int = 0, max_n: int = 12, min_n: int = 3, archive_dir: str | None = None) -> FuzzReport:
    """Colour ``count`` random valid targets and check every answer."""
    rng = np.random.default_rng(seed)
    rep = FuzzReport(max_n=max_n)
    t0 = time.perf_counter()
    for i in range(count):
        n = int(rng.integers(min_n, max_n + 1))
        t = random_target(
            n, rng, universe=int(rng.integers(4, 8)), precoloured=bool(rng.random() < 0.85), tight=bool(i % 2), core=i % 4 == 1
        )
        rep.count += 1
        try:
            out = colour_target(t, allow_fallback=True, archive_dir=archive_dir)
        except (EngineError, NoColouringError) as exc:
            rep.mismatches.append(f"#{i}: {exc}")
            continue
        if out.fallback_used:
            rep.fallbacks += 1
            if brute_force_colour(t.graph, t.lists, t.p_edges) is None:
                rep.mismatches.append(f"#{i}: valid target without a colouring")
        elif not is_proper_colouring(t.graph, t.lists, out.colouring, t.p_edges):
            rep.mismatches.append(f"#{i}: improper colouring")
        for k in out.trace:
            rep.kinds[k.value] = rep.kinds.get(k.value, 0) + 1
    rep.seconds = time.perf_counter() - t0
    return rep


@dataclass
class CompareReport:
    total: int = 0
    rejected: list[str] = field(default_factory=list)
    fallbacks: int = 0
    mismatches: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "rejected": self.rejected,
            "fallbacks": self.fallbacks,
            "mismatches": self.mismatches,
        }


def compare_engine_vs_oracle(instances, archive_dir: str | None = None) -> CompareReport:
    """Run engine and oracle on each target and record disagreements.

    Items that are not valid targets are listed under ``rejected`` and
    skipped.  A mismatch is an improper engine colouring, an engine failure,
    or the oracle finding no colouring at all.
    """
    rep = CompareReport()
    for i, t in enumerate(instances):
        rep.total += 1
        if not isinstance(t, Target):
            rep.rejected.append(f"#{i}: not a target")
            continue
        if not validity_report(t).is_valid:
            rep.rejected.append(f"#{i}: invalid target")
            continue
        oracle = brute_force_colour(t.graph, t.lists, t.p_edges)
        try:
            out = colour_target(t, archive_dir=archive_dir)
        except (EngineError, NoColouringError) as exc:
            rep.mismatches.append(f"#{i}: engine failed: {exc}")
            continue
        rep.fallbacks += out.fallback_used
        if oracle is None:
            rep.mismatches.append(f"#{i}: oracle finds no colouring")
        elif not is_proper_colouring(t.graph, t.lists, out.colouring, t.p_edges):
            rep.mismatches.append(f"#{i}: improper engine colouring")
    return rep
