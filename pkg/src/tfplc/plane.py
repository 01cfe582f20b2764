"""Plane graphs as rotation systems.

A :class:`PlaneGraph` stores, for every vertex, the clockwise cyclic order of
its neighbours.  Faces are traced with the rule ``(u, v) -> (v, w)`` where
``w`` follows ``u`` clockwise around ``v``; under that rule the designated
outer face is walked clockwise, which fixes the meaning of ``v-``/``v+``.

All edits return new graphs.  Query results are sorted so that callers get
reproducible tie-breaking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import EmbeddingError

Dart = tuple[int, int]


def _trace_faces(rotation: Mapping[int, tuple[int, ...]]):
    pos = {v: {w: i for i, w in enumerate(nb)} for v, nb in rotation.items()}
    face_of: dict[Dart, int] = {}
    faces: list[tuple[Dart, ...]] = []
    for v, nb in rotation.items():
        for w in nb:
            if (v, w) in face_of:
                continue
            fid = len(faces)
            darts = []
            a, b = v, w
            while (a, b) not in face_of:
                face_of[(a, b)] = fid
                darts.append((a, b))
                rb = rotation[b]
                a, b = b, rb[(pos[b][a] + 1) % len(rb)]
            faces.append(tuple(darts))
    return pos, faces, face_of


def _components(rotation: Mapping[int, Sequence[int]]) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in rotation:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in rotation[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def _cyclic_index(walk: Sequence[int], target: Sequence[int]) -> int:
    """Offset at which ``target`` equals ``walk`` read cyclically, or -1."""
    n = len(walk)
    if n != len(target):
        return -1
    for off in range(n):
        if all(walk[(off + i) % n] == target[i] for i in range(n)):
            return off
    return -1


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


class PlaneGraph:
    """Immutable simple plane graph with a designated outer face per component.

    Build instances with :func:`build_plane_graph`; the constructor trusts
    its arguments apart from the Euler check.
    """

    __slots__ = ("rotation", "_pos", "_faces", "_face_of", "_outer_ids", "__dict__")

    def __init__(self, rotation: Mapping[int, tuple[int, ...]], outer_darts: Iterable[Dart] = ()):
        self.rotation: dict[int, tuple[int, ...]] = dict(rotation)
        self._pos, self._faces, self._face_of = _trace_faces(self.rotation)
        self._outer_ids = frozenset(self._face_of[d] for d in outer_darts)
        self._check_euler()

    # -- basic structure -------------------------------------------------

    def _check_euler(self) -> None:
        for comp in self.components:
            if len(comp) == 1:
                continue
            cset = set(comp)
            n_edges = sum(len(self.rotation[v]) for v in comp) // 2
            n_faces = len({self._face_of[(v, w)] for v in cset for w in self.rotation[v]})
            if len(comp) - n_edges + n_faces != 2:
                raise EmbeddingError(
                    "NOT_AN_EMBEDDING",
                    f"V - E + F = {len(comp) - n_edges + n_faces} on component containing {comp[0]}",
                )
            if not any(self._face_of[(v, w)] in self._outer_ids for v in comp for w in self.rotation[v]):
                raise EmbeddingError("OUTER_NOT_A_FACE", f"no outer face for component of {comp[0]}")

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self.rotation)

    def __len__(self) -> int:
        return len(self.rotation)

    def __contains__(self, v: object) -> bool:
        return v in self.rotation

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._pos[u]

    def cw_next(self, v: int, u: int) -> int:
        """Neighbour of ``v`` following ``u`` clockwise."""
        rv = self.rotation[v]
        return rv[(self._pos[v][u] + 1) % len(rv)]

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((u, v) for u in self.rotation for v in self.rotation[u] if u < v))

    @property
    def n_edges(self) -> int:
        return len(self._face_of) // 2

    @cached_property
    def components(self) -> list[list[int]]:
        return _components(self.rotation)

    @property
    def is_connected(self) -> bool:
        return len(self.components) <= 1

    @cached_property
    def faces(self) -> list[tuple[int, ...]]:
        """Vertex walks of all faces (isolated vertices contribute none)."""
        return [tuple(d[0] for d in f) for f in self._faces]

    def face_of(self, dart: Dart) -> int:
        return self._face_of[dart]

    @cached_property
    def outer_faces(self) -> tuple[tuple[int, ...], ...]:
        """Clockwise outer walk of every component, in component order."""
        walks = []
        for comp in self.components:
            if len(comp) == 1:
                walks.append((comp[0],))
                continue
            v = comp[0]
            fid = next(
                self._face_of[(a, b)]
                for a in comp
                for b in self.rotation[a]
                if self._face_of[(a, b)] in self._outer_ids
            )
            walks.append(tuple(d[0] for d in self._faces[fid]))
            del v
        return tuple(walks)

    @property
    def outer_face(self) -> tuple[int, ...]:
        return self.outer_faces[0] if self.rotation else ()

    @cached_property
    def outer_darts(self) -> frozenset[Dart]:
        return frozenset(d for fid in self._outer_ids for d in self._faces[fid])

    @cached_property
    def boundary_vertices(self) -> frozenset[int]:
        return frozenset(v for walk in self.outer_faces for v in walk)

    def is_boundary(self, v: int) -> bool:
        return v in self.boundary_vertices

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlaneGraph):
            return NotImplemented
        if set(self.rotation) != set(other.rotation):
            return False
        for v, nb in self.rotation.items():
            if _cyclic_index(other.rotation[v], nb) < 0:
                return False
        return self.outer_darts == other.outer_darts

    def __hash__(self) -> int:
        return hash(frozenset(self.edges))

    def __repr__(self) -> str:
        return f"PlaneGraph(n={len(self)}, m={self.n_edges}, outer={self.outer_face})"

    # -- derived subgraphs -----------------------------------------------

    def induced(self, keep: Iterable[int], drop_edges: Iterable[Iterable[int]] = ()) -> "PlaneGraph":
        """Induced subgraph, optionally without some edges; each new
        component's outer face is the face containing the old outer region."""
        keep = set(keep)
        drop = {frozenset(e) for e in drop_edges}
        rot = {
            v: tuple(w for w in nb if w in keep and frozenset((v, w)) not in drop)
            for v, nb in self.rotation.items()
            if v in keep
        }
        pos, faces, face_of = _trace_faces(rot)
        outer_darts: list[Dart] = []
        parent_comp_of = {}
        for i, comp in enumerate(self.components):
            for v in comp:
                parent_comp_of[v] = i
        for comp in _components(rot):
            if len(comp) == 1:
                continue
            cset = set(comp)
            uf = _UnionFind(len(self._faces))
            pcomp = self.components[parent_comp_of[comp[0]]]
            for a in pcomp:
                for b in self.rotation[a]:
                    if a < b and not (a in cset and b in cset and frozenset((a, b)) not in drop):
                        uf.union(self._face_of[(a, b)], self._face_of[(b, a)])
            outer_cls = {
                uf.find(self._face_of[(a, b)])
                for a in pcomp
                for b in self.rotation[a]
                if self._face_of[(a, b)] in self._outer_ids
            }
            chosen = None
            for a in comp:
                for b in rot[a]:
                    if uf.find(self._face_of[(a, b)]) in outer_cls:
                        chosen = (a, b)
                        break
                if chosen:
                    break
            if chosen is None:
                chosen = (comp[0], rot[comp[0]][0])
            outer_darts.append(chosen)
        return PlaneGraph(rot, outer_darts)

    def mirror(self) -> "PlaneGraph":
        rot = {v: tuple(reversed(nb)) for v, nb in self.rotation.items()}
        return PlaneGraph(rot, [(b, a) for (a, b) in self.outer_darts])


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def build_plane_graph(
    rotations: Mapping[int, Sequence[int]],
    outer: Sequence[int] | Sequence[Sequence[int]] | None = None,
) -> PlaneGraph:
    """Validate a rotation system and designate its outer face.

    Args:
        rotations: clockwise neighbour list per vertex.
        outer: the outer face walk, or one walk per component for disconnected
            graphs.  Components with a single face (trees) may be omitted.
            A walk that only matches a face read backwards mirrors that
            component so the outer face runs clockwise.

    Raises:
        EmbeddingError: ``ASYMMETRIC_ADJACENCY``, ``NOT_AN_EMBEDDING`` or
            ``OUTER_NOT_A_FACE``.
    """
    rot: dict[int, tuple[int, ...]] = {}
    for v, nb in rotations.items():
        nb = tuple(nb)
        if len(set(nb)) != len(nb) or v in nb:
            raise EmbeddingError("ASYMMETRIC_ADJACENCY", f"vertex {v} has a repeated neighbour or loop")
        rot[v] = nb
    for v, nb in rot.items():
        for w in nb:
            if w not in rot or v not in rot[w]:
                raise EmbeddingError("ASYMMETRIC_ADJACENCY", f"{w} listed at {v} but not vice versa")

    if outer is None:
        walks: list[tuple[int, ...]] = []
    elif len(outer) and not isinstance(outer[0], int):
        walks = [tuple(w) for w in outer]  # type: ignore[arg-type]
    else:
        walks = [tuple(outer)]  # type: ignore[arg-type]

    _, faces, face_of = _trace_faces(rot)
    comps = _components(rot)
    comp_of = {v: i for i, c in enumerate(comps) for v in c}

    # Euler before matching so a non-planar input reports the right code.
    for comp in comps:
        if len(comp) == 1:
            continue
        n_edges = sum(len(rot[v]) for v in comp) // 2
        n_faces = len({face_of[(v, w)] for v in comp for w in rot[v]})
        if len(comp) - n_edges + n_faces != 2:
            raise EmbeddingError("NOT_AN_EMBEDDING", f"V - E + F = {len(comp) - n_edges + n_faces}")

    walks_by_comp: dict[int, tuple[int, ...]] = {}
    for walk in walks:
        if not walk or walk[0] not in rot:
            raise EmbeddingError("OUTER_NOT_A_FACE", f"outer walk {walk} names unknown vertices")
        walks_by_comp[comp_of[walk[0]]] = walk

    outer_darts: list[Dart] = []
    mirrored: set[int] = set()
    for ci, comp in enumerate(comps):
        if len(comp) == 1:
            continue
        cfaces = sorted({face_of[(v, w)] for v in comp for w in rot[v]})
        walk = walks_by_comp.get(ci)
        if walk is None:
            if len(cfaces) != 1:
                raise EmbeddingError("OUTER_NOT_A_FACE", f"component of {comp[0]} needs an outer walk")
            outer_darts.append(faces[cfaces[0]][0])
            continue
        found = None
        for fid in cfaces:
            fw = [d[0] for d in faces[fid]]
            off = _cyclic_index(fw, walk)
            if off >= 0:
                found = faces[fid][off]
                break
        if found is None:
            for fid in cfaces:
                fw = [d[0] for d in faces[fid]]
                # the mirror of face fw is traced as reversed(fw)
                rev = list(reversed(fw))
                if _cyclic_index(rev, walk) >= 0:
                    found = (walk[0], walk[1 % len(walk)])
                    mirrored.add(ci)
                    break
        if found is None:
            raise EmbeddingError("OUTER_NOT_A_FACE", f"{walk} is not a face")
        outer_darts.append(found)
    if mirrored:
        for ci in mirrored:
            for v in comps[ci]:
                rot[v] = tuple(reversed(rot[v]))
    return PlaneGraph(rot, outer_darts)


# ---------------------------------------------------------------------------
# Boundary walks and simple queries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryWalk:
    """Clockwise closed walk around the outer face."""

    cycle: tuple[int, ...]

    @property
    def is_simple(self) -> bool:
        return len(set(self.cycle)) == len(self.cycle)

    def succ(self, v: int) -> int:
        """``v+``: the vertex after ``v`` clockwise (first occurrence)."""
        i = self.cycle.index(v)
        return self.cycle[(i + 1) % len(self.cycle)]

    def pred(self, v: int) -> int:
        """``v-``: the vertex before ``v`` clockwise (first occurrence)."""
        i = self.cycle.index(v)
        return self.cycle[i - 1]

    def __len__(self) -> int:
        return len(self.cycle)

    def __iter__(self) -> Iterator[int]:
        return iter(self.cycle)


def boundary_walk(g: PlaneGraph) -> BoundaryWalk:
    return BoundaryWalk(g.outer_face)


def is_triangle_free(g: PlaneGraph) -> bool:
    for u, v in g.edges:
        nu = g._pos[u]
        if any(w in nu for w in g.rotation[v]):
            return False
    return True


def cut_vertices(g: PlaneGraph) -> list[int]:
    """Articulation points (iterative lowpoint search), sorted."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    cuts: set[int] = set()
    t = 0
    for root in g.rotation:
        if root in disc:
            continue
        disc[root] = low[root] = t
        t += 1
        root_children = 0
        stack = [(root, None, iter(g.rotation[root]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = t
                    t += 1
                    if v == root:
                        root_children += 1
                    stack.append((w, v, iter(g.rotation[w])))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if parent is not None:
                low[parent] = min(low[parent], low[v])
                if parent != root and low[v] >= disc[parent]:
                    cuts.add(parent)
        if root_children > 1:
            cuts.add(root)
    return sorted(cuts)


def is_two_connected(g: PlaneGraph) -> bool:
    return len(g) >= 3 and g.is_connected and not cut_vertices(g)


# ---------------------------------------------------------------------------
# Cycles, regions, chords
# ---------------------------------------------------------------------------


def _is_cycle(g: PlaneGraph, cycle: Sequence[int]) -> bool:
    n = len(cycle)
    if n < 3 or len(set(cycle)) != n or any(v not in g for v in cycle):
        return False
    return all(g.adjacent(cycle[i], cycle[(i + 1) % n]) for i in range(n))


def _cycle_sides(g: PlaneGraph, cycle: Sequence[int]) -> tuple[frozenset[int], frozenset[int]]:
    """Faces strictly inside ``cycle`` and the vertices strictly inside it.

    Faces on one side are flood-filled across edges not on the cycle; the side
    holding the outer face is the exterior.
    """
    n = len(cycle)
    on_cycle = set(cycle)
    cedges = {frozenset((cycle[i], cycle[(i + 1) % n])) for i in range(n)}
    start = g._face_of[(cycle[0], cycle[1])]
    other = g._face_of[(cycle[1], cycle[0])]
    seen = {start}
    stack = [start]
    while stack:
        f = stack.pop()
        for a, b in g._faces[f]:
            if frozenset((a, b)) in cedges:
                continue
            h = g._face_of[(b, a)]
            if h not in seen:
                seen.add(h)
                stack.append(h)
    comp_faces = {g._face_of[(v, w)] for v in _component_of(g, cycle[0]) for w in g.rotation[v]}
    if seen & g._outer_ids:
        inside = comp_faces - seen
    else:
        inside = seen
    if other in seen and start in inside:
        # cycle edges bound the same region on both sides: nothing enclosed
        return frozenset(), frozenset()
    verts = frozenset(a for f in inside for a, _ in g._faces[f] if a not in on_cycle)
    return frozenset(inside), verts


def cycle_interior(g: PlaneGraph, cycle: Sequence[int]) -> frozenset[int]:
    """Vertices strictly inside ``cycle`` (the side away from the outer face)."""
    return _cycle_sides(g, cycle)[1]


def _component_of(g: PlaneGraph, v: int) -> list[int]:
    for comp in g.components:
        if v in comp:
            return comp
    raise KeyError(v)


@dataclass(frozen=True)
class CycleRegion:
    """A cycle with its strict interior; closed sides are computed on demand."""

    cycle: tuple[int, ...]
    interior_vertices: frozenset[int]
    graph: PlaneGraph = field(repr=False, compare=False)

    @cached_property
    def int_closed(self) -> PlaneGraph:
        return split_at_cycle(self.graph, self.cycle)[0]

    @cached_property
    def ext_closed(self) -> PlaneGraph:
        return split_at_cycle(self.graph, self.cycle)[1]


def simple_cycles(g: PlaneGraph, length: int) -> list[tuple[int, ...]]:
    """All cycles of the given length, each once: smallest vertex first and
    second vertex smaller than the last."""
    out = []
    order = {v: i for i, v in enumerate(sorted(g.rotation))}
    for s in sorted(g.rotation):
        rank = order[s]
        path = [s]
        onpath = {s}

        def extend():
            v = path[-1]
            if len(path) == length:
                if g.adjacent(v, s) and path[1] < path[-1]:
                    out.append(tuple(path))
                return
            for w in g.rotation[v]:
                if w not in onpath and order[w] > rank:
                    path.append(w)
                    onpath.add(w)
                    extend()
                    path.pop()
                    onpath.discard(w)

        extend()
    out.sort()
    return out


def find_separating_cycles(g: PlaneGraph, length: int) -> list[CycleRegion]:
    """Cycles of ``length`` with a nonempty strict interior, sorted."""
    regions = []
    for c in simple_cycles(g, length):
        inner = cycle_interior(g, c)
        if inner:
            regions.append(CycleRegion(c, inner, g))
    return regions


def split_at_cycle(g: PlaneGraph, cycle: Sequence[int]) -> tuple[PlaneGraph, PlaneGraph]:
    """Return ``(int[C], ext[C])``; the outer face of ``int[C]`` is ``C``.

    Chords of ``C`` go to the side they are drawn on, so the two edge sets
    share exactly the cycle edges.
    """
    if not _is_cycle(g, cycle):
        raise EmbeddingError("NOT_A_CYCLE", f"{tuple(cycle)} is not a cycle")
    faces, inner = _cycle_sides(g, cycle)
    n = len(cycle)
    on = set(cycle)
    cedges = {frozenset((cycle[i], cycle[(i + 1) % n])) for i in range(n)}
    chords_in, chords_out = [], []
    for a in cycle:
        for b in g.rotation[a]:
            if a < b and b in on and frozenset((a, b)) not in cedges:
                (chords_in if g._face_of[(a, b)] in faces else chords_out).append((a, b))
    closed_in = g.induced(on | inner, drop_edges=chords_out)
    closed_out = g.induced(set(g.rotation) - inner, drop_edges=chords_in)
    return closed_in, closed_out


def delete_vertices(g: PlaneGraph, s: Iterable[int]) -> PlaneGraph:
    s = set(s)
    return g.induced(v for v in g.rotation if v not in s)


@dataclass(frozen=True)
class IChord:
    """Path between two non-consecutive boundary vertices through the interior."""

    path: tuple[int, ...]
    endpoint_labels: tuple[int, int] | None = None

    @property
    def length(self) -> int:
        return len(self.path) - 1

    @property
    def ends(self) -> tuple[int, int]:
        return self.path[0], self.path[-1]


def find_i_chords(g: PlaneGraph, i: int) -> list[IChord]:
    """All ``i``-chords, each listed in its lexicographically smaller direction."""
    from .errors import EmbeddingError as _E

    if not 1 <= i <= 4:
        raise ValueError("chord length must be in 1..4")
    walk = g.outer_face
    if not is_two_connected(g):
        raise _E("NOT_TWO_CONNECTED", "chords need a 2-connected graph")
    bpos = {v: k for k, v in enumerate(walk)}
    nb = len(walk)

    def consecutive(a: int, b: int) -> bool:
        d = (bpos[a] - bpos[b]) % nb
        return d in (1, nb - 1)

    found: set[tuple[int, ...]] = set()
    for s in walk:
        path = [s]

        def extend():
            v = path[-1]
            if len(path) == i:
                for w in g.rotation[v]:
                    if w in bpos and w != s and w not in path and not consecutive(s, w):
                        p = tuple(path) + (w,)
                        found.add(min(p, p[::-1]))
                return
            for w in g.rotation[v]:
                if w not in bpos and w not in path:
                    path.append(w)
                    extend()
                    path.pop()

        extend()
    return [IChord(p) for p in sorted(found)]


# ---------------------------------------------------------------------------
# Edits
# ---------------------------------------------------------------------------


def _face_with_run(g: PlaneGraph, u: int, v: int, via: int | None, inner_only: bool):
    """A face walk in which ``u, x, v`` appear consecutively; returns
    ``(face_id, a, x, b)`` with ``a`` before ``u`` and ``b`` after ``v``."""
    for fid, darts in enumerate(g._faces):
        if inner_only and fid in g._outer_ids:
            continue
        n = len(darts)
        for k in range(n):
            if darts[k][0] == u and darts[(k + 2) % n][0] == v and n >= 3:
                x = darts[k][1]
                if via is not None and x != via:
                    continue
                a = darts[k - 1][0]
                b = darts[(k + 2) % n][1]
                return fid, a, x, b
    return None


def identify_vertices(
    g: PlaneGraph, u: int, v: int, via: int | None = None, inner_only: bool = False
) -> PlaneGraph:
    """Merge ``u`` and ``v`` (at distance two along a face) into ``u``.

    The two vertices are joined through the shared face and the new edge is
    contracted; parallel edges that arise are coalesced by dropping the copy
    inherited from ``v``.  Triangles in the result are the caller's concern.

    Args:
        via: if given, the face must contain the run ``u, via, v``.
        inner_only: never merge across an outer face.

    Raises:
        EmbeddingError: ``ADJACENT_VERTICES`` or ``NO_SHARED_FACE``.
    """
    if g.adjacent(u, v):
        raise EmbeddingError("ADJACENT_VERTICES", f"{u} and {v} are adjacent")
    hit = _face_with_run(g, u, v, via, inner_only)
    swapped = False
    if hit is None:
        hit = _face_with_run(g, v, u, via, inner_only)
        swapped = True
    if hit is None:
        raise EmbeddingError("NO_SHARED_FACE", f"{u} and {v} are not two apart on a face")
    fid, a, x, b = hit
    first, second = (v, u) if swapped else (u, v)
    # first -> x -> second along face fid; a precedes first, b follows second.
    ru, rv = g.rotation[first], g.rotation[second]
    iu = g._pos[first][x]
    part_u = [ru[(iu + k) % len(ru)] for k in range(len(ru))]  # x ... a
    iv = g._pos[second][b]
    part_v = [rv[(iv + k) % len(rv)] for k in range(len(rv))]  # b ... x
    nbr_u = set(ru)
    merged = part_u + [w for w in part_v if w not in nbr_u]
    keep_id = u
    rot: dict[int, tuple[int, ...]] = {}
    for w, nb in g.rotation.items():
        if w in (u, v):
            continue
        new = []
        for y in nb:
            if y == first:
                new.append(keep_id)
            elif y == second:
                if w not in nbr_u:
                    new.append(keep_id)
            else:
                new.append(y)
        rot[w] = tuple(new)
    rot_out: dict[int, tuple[int, ...]] = {}
    for w in g.rotation:
        if w == u:
            rot_out[keep_id] = tuple(merged)
        elif w == v:
            continue
        else:
            rot_out[w] = rot[w]

    def mapv(y: int) -> int:
        return keep_id if y in (u, v) else y

    outer: list[Dart] = []
    for comp_walk in g.outer_faces:
        # pick an outer dart that survives the merge
        n = len(comp_walk)
        chosen = None
        for k in range(n):
            p, q = comp_walk[k], comp_walk[(k + 1) % n]
            mp, mq = mapv(p), mapv(q)
            if mp == mq or mp not in rot_out:
                continue
            if (p == second and q in nbr_u) or (q == second and p in nbr_u):
                continue
            if mq in rot_out[mp]:
                chosen = (mp, mq)
                break
        if chosen is None and n == 1 and mapv(comp_walk[0]) in rot_out:
            continue
        if chosen is None:
            raise EmbeddingError("NO_SHARED_FACE", "outer face collapsed by identification")
        outer.append(chosen)
    return PlaneGraph(rot_out, outer)


def suppress_vertex(g: PlaneGraph, x: int) -> PlaneGraph:
    """Replace a degree-2 vertex ``x`` by an edge between its two neighbours."""
    if g.degree(x) != 2:
        raise EmbeddingError("NOT_DEGREE_TWO", f"{x} has degree {g.degree(x)}")
    a, b = g.rotation[x]
    if g.adjacent(a, b):
        raise EmbeddingError("ADJACENT_VERTICES", f"{a} and {b} already adjacent")
    rot = {}
    for w, nb in g.rotation.items():
        if w == x:
            continue
        if w == a:
            nb = tuple(b if y == x else y for y in nb)
        elif w == b:
            nb = tuple(a if y == x else y for y in nb)
        rot[w] = nb
    outer = []
    for walk in g.outer_faces:
        n = len(walk)
        for k in range(n):
            p, q = walk[k], walk[(k + 1) % n]
            if p == x or q == x:
                continue
            outer.append((p, q))
            break
        else:
            # the outer walk was a..x..b only; replaced edge carries it
            i = walk.index(x)
            outer.append((walk[i - 1], walk[(i + 1) % n]))
    return PlaneGraph(rot, outer)


# ---------------------------------------------------------------------------
# Semi-fans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemiFan:
    """Path ``rim`` of odd length plus ``center`` joined to every other rim vertex."""

    center: int
    rim: tuple[int, ...]

    def __post_init__(self):
        if len(self.rim) < 3 or len(self.rim) % 2 == 0:
            raise ValueError("semi-fan rim must have 2q+1 >= 3 vertices")

    @property
    def q(self) -> int:
        return (len(self.rim) - 1) // 2

    @property
    def edges(self) -> list[tuple[int, int]]:
        es = [(self.rim[i], self.rim[i + 1]) for i in range(len(self.rim) - 1)]
        es += [(self.center, self.rim[i]) for i in range(0, len(self.rim), 2)]
        return es


def semi_fan_in(g: PlaneGraph, center: int, rim: Sequence[int]) -> bool:
    """True iff the subgraph of ``g`` induced on ``rim + center`` is exactly that semi-fan."""
    try:
        fan = SemiFan(center, tuple(rim))
    except ValueError:
        return False
    verts = set(fan.rim) | {center}
    if len(verts) != len(fan.rim) + 1:
        return False
    want = {frozenset(e) for e in fan.edges}
    have = {frozenset((a, b)) for a in verts for b in g.rotation[a] if b in verts}
    return want == have
