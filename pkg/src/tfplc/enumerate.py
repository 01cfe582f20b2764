"""Exhaustive generation of small connected triangle-free planar graphs.

Graphs on ``n`` vertices are grown from those on ``n - 1`` by adding a vertex
joined to a nonempty independent set; every connected graph arises this way
(delete a non-cut vertex).  Isomorphs are rejected with a canonical form,
the lexicographically smallest adjacency bit string over all labellings,
computed by refining on degrees first.  Each survivor is embedded with
networkx and its first traced face becomes the outer face.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Iterator

import networkx as nx

from .errors import EnumerationError
from .plane import PlaneGraph, _trace_faces, build_plane_graph

DEFAULT_BOUND = 8

Adj = tuple[frozenset[int], ...]


def canonical_form(adj: Adj) -> tuple[int, ...]:
    """Smallest upper-triangle adjacency string over degree-respecting labellings.

    Vertices are grouped by (degree, sorted neighbour degrees); only orders
    within a group are permuted, so the result is invariant under relabelling.
    """
    n = len(adj)
    deg = [len(a) for a in adj]
    key = [(deg[v], tuple(sorted(deg[w] for w in adj[v]))) for v in range(n)]
    groups: dict[tuple, list[int]] = {}
    for v in range(n):
        groups.setdefault(key[v], []).append(v)
    ordered = [groups[k] for k in sorted(groups)]
    best = None
    for choice in product(*(permutations(g) for g in ordered)):
        order = [v for block in choice for v in block]
        pos = {v: i for i, v in enumerate(order)}
        bits = tuple(1 if order[j] in adj[order[i]] else 0 for i in range(n) for j in range(i + 1, n))
        if best is None or bits < best:
            best = bits
        del pos
    return (n, *best) if best is not None else (n,)


def _independent_subsets(adj: Adj) -> Iterator[tuple[int, ...]]:
    n = len(adj)

    def rec(i: int, chosen: list[int]) -> Iterator[tuple[int, ...]]:
        if i == n:
            if chosen:
                yield tuple(chosen)
            return
        yield from rec(i + 1, chosen)
        if not any(c in adj[i] for c in chosen):
            chosen.append(i)
            yield from rec(i + 1, chosen)
            chosen.pop()

    yield from rec(0, [])


def _is_planar(adj: Adj) -> bool:
    if len(adj) < 5:
        return True
    g = nx.Graph()
    g.add_nodes_from(range(len(adj)))
    g.add_edges_from((u, v) for u in range(len(adj)) for v in adj[u] if u < v)
    return nx.check_planarity(g)[0]


def embed(adj: Adj) -> PlaneGraph:
    """Embed a connected planar graph given as 0-based adjacency; vertices become ``1..n``."""
    n = len(adj)
    if n == 1:
        return build_plane_graph({1: ()})
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from((u, v) for u in range(n) for v in adj[u] if u < v)
    ok, emb = nx.check_planarity(g)
    if not ok:
        raise EnumerationError("NOT_PLANAR", "graph has no plane embedding")
    rot = {v + 1: tuple(w + 1 for w in emb.neighbors_cw_order(v)) for v in range(n)}
    _, faces, _ = _trace_faces(rot)
    return build_plane_graph(rot, tuple(d[0] for d in faces[0]))


def triangle_free_planar_adjacencies(n_max: int) -> list[list[Adj]]:
    """Isomorphism classes by order: entry ``n - 1`` lists the graphs on ``n`` vertices."""
    levels: list[list[Adj]] = [[(frozenset(),)]]
    for n in range(2, n_max + 1):
        seen: set[tuple[int, ...]] = set()
        out: list[Adj] = []
        for adj in levels[-1]:
            for s in _independent_subsets(adj):
                new = [set(a) for a in adj] + [set(s)]
                for v in s:
                    new[v].add(n - 1)
                cand = tuple(frozenset(a) for a in new)
                cf = canonical_form(cand)
                if cf in seen:
                    continue
                seen.add(cf)
                if _is_planar(cand):
                    out.append(cand)
        levels.append(out)
    return levels


def enumerate_triangle_free_plane_graphs(n_max: int, bound: int = DEFAULT_BOUND) -> Iterator[PlaneGraph]:
    """All connected triangle-free planar graphs on ``1..n_max`` vertices, one embedding each.

    Raises:
        EnumerationError: ``BOUND_EXCEEDED`` when ``n_max > bound``.
    """
    if n_max > bound:
        raise EnumerationError("BOUND_EXCEEDED", f"n_max {n_max} exceeds bound {bound}")
    if n_max < 1:
        return
    for level in triangle_free_planar_adjacencies(n_max):
        for adj in level:
            yield embed(adj)
