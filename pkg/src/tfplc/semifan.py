"""Constructive colouring of semi-fans.

A semi-fan is a path ``y1 .. y(2q+1)`` plus a center joined to the odd
positions.  Fixing the center's colour leaves a path, so a left-to-right
sweep over feasible colour sets decides colourability exactly.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping

from .errors import NoColouringError
from .plane import SemiFan


def semi_fan_colour(
    fan: SemiFan,
    lists: Mapping[int, Iterable[int]],
    excluded_center_companion: int | None = None,
    excluded_edges: Iterable[Iterable[int]] = (),
) -> dict[int, int]:
    """Colour ``fan`` from ``lists``; smallest colours win ties.

    Args:
        fan: the semi-fan.
        lists: colour list for every center and rim vertex.
        excluded_center_companion: the chord vertex removed before the fan
            is coloured; it must not be part of the fan and is otherwise
            ignored.
        excluded_edges: fan edges that impose no constraint (edges between
            already precoloured vertices).

    Raises:
        NoColouringError: no proper colouring exists.
    """
    if excluded_center_companion is not None and (
        excluded_center_companion == fan.center or excluded_center_companion in fan.rim
    ):
        raise ValueError("the excluded companion must lie outside the fan")
    skip = {frozenset(e) for e in excluded_edges}
    rim = fan.rim
    x = fan.center
    spoke = [i % 2 == 0 and frozenset((x, y)) not in skip for i, y in enumerate(rim)]
    link = [frozenset((rim[i], rim[i + 1])) not in skip for i in range(len(rim) - 1)]
    for cx in sorted(set(lists[x])):
        feas: list[list[int]] = []
        for i, y in enumerate(rim):
            cand = [c for c in sorted(set(lists[y])) if not (spoke[i] and c == cx)]
            if i:
                prev = feas[-1]
                if link[i - 1]:
                    cand = [c for c in cand if any(p != c for p in prev)]
                elif not prev:
                    cand = []
            if not cand:
                break
            feas.append(cand)
        else:
            out = {x: cx}
            nxt = None
            for i in range(len(rim) - 1, -1, -1):
                choice = next(c for c in feas[i] if nxt is None or not link[i] or c != nxt)
                out[rim[i]] = choice
                nxt = choice
            return out
    raise NoColouringError("semi-fan has no colouring from these lists")


def reference_orientation(q: int) -> dict[tuple[str, int], list[tuple[str, int]]]:
    """Orientation of the fan (center ``("x", 0)``, rim ``("y", 1..2q+1)``)
    with out-degrees 3 at the center, 1 at even rim vertices, 2 at odd inner
    rim vertices and 0 at both ends.

    Returned as ``tail -> [heads]``.  Requires ``q >= 2``.
    """
    if q < 2:
        raise ValueError("the reference orientation needs q >= 2")
    x = ("x", 0)
    y = [None] + [("y", i) for i in range(1, 2 * q + 2)]
    last = 2 * q + 1
    out: dict[tuple[str, int], list[tuple[str, int]]] = {x: [y[1], y[last], y[3]]}
    out.update({y[i]: [] for i in range(1, last + 1)})
    out[y[2]].append(y[1])
    out[y[3]] += [y[2], y[4]]
    for i in range(4, last, 2):
        out[y[i]].append(y[i + 1])
    for i in range(5, last, 2):
        out[y[i]] += [x, y[i + 1]]
    return out


def eulerian_difference(q: int) -> int:
    """Even minus odd spanning Eulerian subgraphs of the reference orientation.

    A nonzero value certifies choosability with lists one larger than the
    out-degrees; intended for small ``q`` only.
    """
    d = reference_orientation(q)
    arcs = [(a, b) for a, hs in d.items() for b in hs]
    verts = list(d)
    even = odd = 0
    for r in range(len(arcs) + 1):
        for sub in combinations(range(len(arcs)), r):
            bal = {v: 0 for v in verts}
            for i in sub:
                a, b = arcs[i]
                bal[a] += 1
                bal[b] -= 1
            if all(val == 0 for val in bal.values()):
                if r % 2 == 0:
                    even += 1
                else:
                    odd += 1
    return even - odd
