"""Brute-force list colouring, canonical list enumeration and choosability sweeps.

Nothing here depends on the colouring engine; the backtracker is the
independent reference the engine is checked against.
"""

from __future__ import annotations

import enum
import itertools
import sys
import time
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import EnumerationError, TargetError
from .plane import PlaneGraph, is_triangle_free

Adjacency = Mapping[int, Iterable[int]]


def _adjacency(g: PlaneGraph | Adjacency) -> dict[int, tuple[int, ...]]:
    if isinstance(g, PlaneGraph):
        return dict(g.rotation)
    return {v: tuple(nb) for v, nb in g.items()}


def is_proper_colouring(
    g: PlaneGraph | Adjacency,
    lists: Mapping[int, Iterable[int]],
    colouring: Mapping[int, int],
    excluded: Iterable[Iterable[int]] = (),
) -> bool:
    """Independent check: every vertex coloured from its list, no monochromatic
    edge outside ``excluded``."""
    adj = _adjacency(g)
    skip = {frozenset(e) for e in excluded}
    for v in adj:
        if v not in colouring or colouring[v] not in set(lists[v]):
            return False
    for v, nb in adj.items():
        for w in nb:
            if v < w and colouring[v] == colouring[w] and frozenset((v, w)) not in skip:
                return False
    return True


def brute_force_colour(
    g: PlaneGraph | Adjacency,
    lists: Mapping[int, Iterable[int]],
    excluded: Iterable[Iterable[int]] = (),
) -> dict[int, int] | None:
    """Find a proper list colouring, or return ``None`` if none exists.

    Backtracking picks the uncoloured vertex with the fewest remaining
    colours (ties: more uncoloured neighbours, then smaller id) and tries
    colours in ascending order, pruning as soon as a neighbour runs dry.
    """
    adj = _adjacency(g)
    skip = {frozenset(e) for e in excluded}
    palette = sorted({c for v in adj for c in lists[v]})
    bit = {c: 1 << i for i, c in enumerate(palette)}
    nbrs = {v: [w for w in adj[v] if frozenset((v, w)) not in skip] for v in adj}
    dom = {}
    for v in adj:
        m = 0
        for c in lists[v]:
            m |= bit[c]
        if not m:
            return None
        dom[v] = m
    order_key = {v: i for i, v in enumerate(sorted(adj))}
    uncoloured = set(adj)
    result: dict[int, int] = {}

    def pick() -> int:
        best, bkey = None, None
        for v in uncoloured:
            key = (bin(dom[v]).count("1"), -len(nbrs[v]), order_key[v])
            if bkey is None or key < bkey:
                best, bkey = v, key
        return best  # type: ignore[return-value]

    def solve() -> bool:
        if not uncoloured:
            return True
        v = pick()
        uncoloured.discard(v)
        m = dom[v]
        while m:
            low = m & -m
            m ^= low
            changed = []
            ok = True
            for w in nbrs[v]:
                if w in uncoloured and dom[w] & low:
                    dom[w] ^= low
                    changed.append(w)
                    if not dom[w]:
                        ok = False
                        break
            if ok:
                result[v] = palette[low.bit_length() - 1]
                if solve():
                    return True
            for w in changed:
                dom[w] |= low
        uncoloured.add(v)
        result.pop(v, None)
        return False

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(adj) + 100))
    try:
        return dict(result) if solve() else None
    finally:
        sys.setrecursionlimit(old)


def naive_colourable(
    g: PlaneGraph | Adjacency, lists: Mapping[int, Iterable[int]], excluded: Iterable[Iterable[int]] = ()
) -> bool:
    """Full cartesian-product check; exponential, for cross-validation only."""
    adj = _adjacency(g)
    skip = {frozenset(e) for e in excluded}
    verts = sorted(adj)
    edges = [(verts.index(a), verts.index(b)) for a in verts for b in adj[a] if a < b and frozenset((a, b)) not in skip]
    for combo in itertools.product(*(sorted(lists[v]) for v in verts)):
        if all(combo[i] != combo[j] for i, j in edges):
            return True
    return False


# ---------------------------------------------------------------------------
# Canonical list assignments
# ---------------------------------------------------------------------------


def _canonical_types(need: list[int], cap: int) -> Iterator[list[int]]:
    """Multisets (nonincreasing lists) of nonempty vertex masks covering
    vertex ``i`` exactly ``need[i]`` times, using at most ``cap`` masks."""
    n = len(need)
    need = list(need)
    chosen: list[int] = []

    def rec(prev: int, slots: int):
        remaining = [i for i in range(n) if need[i]]
        if not remaining:
            yield list(chosen)
            return
        if slots == 0:
            return
        avail = 0
        must = 0
        for i in remaining:
            avail |= 1 << i
            if need[i] == slots:
                must |= 1 << i
            elif need[i] > slots:
                return
        free = avail & ~must
        sub = free
        while True:
            t = sub | must
            if t and t <= prev:
                chosen.append(t)
                for i in range(n):
                    if t >> i & 1:
                        need[i] -= 1
                yield from rec(t, slots - 1)
                for i in range(n):
                    if t >> i & 1:
                        need[i] += 1
                chosen.pop()
            if sub == 0:
                break
            sub = (sub - 1) & free

    yield from rec((1 << n) - 1, cap)


def enumerate_canonical_lists(
    g: PlaneGraph | Sequence[int] | Adjacency,
    sizes: Mapping[int, int],
    universe_cap: int,
) -> Iterator[dict[int, frozenset]]:
    """Every list assignment with the given sizes over colours ``1..cap``, one
    per orbit under colour renaming.

    Colour ``c`` is attached to the ``c``-th vertex class in a canonical
    (nonincreasing bitmask) ordering, so renamed copies never repeat.

    Raises:
        EnumerationError: ``CAP_TOO_SMALL`` when some size exceeds the cap.
    """
    verts = sorted(sizes)
    if any(not 1 <= sizes[v] <= 4 for v in verts):
        raise EnumerationError("SIZE_OUT_OF_RANGE", "list sizes must lie in 1..4")
    if verts and universe_cap < max(sizes.values()):
        raise EnumerationError("CAP_TOO_SMALL", f"cap {universe_cap} < max size {max(sizes.values())}")
    cap = min(universe_cap, sum(sizes.values()))
    for types in _canonical_types([sizes[v] for v in verts], cap):
        lists = {v: set() for v in verts}
        for c, t in enumerate(types, start=1):
            for i, v in enumerate(verts):
                if t >> i & 1:
                    lists[v].add(c)
        yield {v: frozenset(s) for v, s in lists.items()}


def orbit_size(lists: Mapping[int, frozenset], universe: int) -> int:
    """Number of assignments over colours ``1..universe`` renaming-equivalent to ``lists``."""
    classes: dict[frozenset, int] = {}
    colours = {c for s in lists.values() for c in s}
    for c in colours:
        key = frozenset(v for v, s in lists.items() if c in s)
        classes[key] = classes.get(key, 0) + 1
    m = len(colours)
    if m > universe:
        return 0
    denom = 1
    for mult in classes.values():
        denom *= factorial(mult)
    return factorial(universe) // (factorial(universe - m) * denom)


def naive_assignment_count(sizes: Mapping[int, int], universe: int) -> int:
    out = 1
    for s in sizes.values():
        out *= comb(universe, s)
    return out


# ---------------------------------------------------------------------------
# Sufficiency and sweeps
# ---------------------------------------------------------------------------


class Status(str, enum.Enum):
    ALL_COLOURABLE = "ALL_COLOURABLE"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    CAPPED = "CAPPED"


@dataclass(frozen=True)
class SufficiencyQuery:
    """Is ``graph`` colourable from every list assignment with sizes ``k`` on
    ``x_set`` and ``k + 1`` elsewhere?"""

    graph: PlaneGraph | Adjacency
    x_set: frozenset[int]
    k: int = 3

    def sizes(self) -> dict[int, int]:
        adj = _adjacency(self.graph)
        return {v: self.k if v in self.x_set else self.k + 1 for v in adj}


@dataclass
class Verdict:
    status: Status
    witness: dict | None = None
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"status": self.status.value, "stats": self.stats}
        if self.witness is not None:
            out["witness"] = {
                "adjacency": {str(v): list(nb) for v, nb in self.witness["adjacency"].items()},
                "lists": {str(v): sorted(s) for v, s in self.witness["lists"].items()},
            }
        return out


def peel_core(adj: Adjacency, sizes: Mapping[int, int]) -> dict[int, tuple[int, ...]]:
    """Repeatedly drop vertices whose list size exceeds their degree.

    Such a vertex can always be coloured after the rest, so the graph is
    choosable for these sizes iff the remaining core is.
    """
    live = {v: set(nb) for v, nb in _adjacency(adj).items()}
    changed = True
    while changed:
        changed = False
        for v in sorted(live):
            if sizes[v] > len(live[v]):
                for w in live.pop(v):
                    live[w].discard(v)
                changed = True
    return {v: tuple(sorted(nb)) for v, nb in live.items()}


def verify_k_sufficient(q: SufficiencyQuery, universe_cap: int = 6, prune: bool = False) -> Verdict:
    """Exhaust canonical assignments of the query's sizes under the cap.

    With ``prune`` the search runs only on the degree core (see
    :func:`peel_core`); an empty core proves colourability for every list
    assignment regardless of the cap.
    """
    t0 = time.perf_counter()
    adj = _adjacency(q.graph)
    sizes = q.sizes()
    if prune:
        adj = peel_core(adj, sizes)
        sizes = {v: sizes[v] for v in adj}
    checked = 0
    total = sum(sizes.values())
    for lists in enumerate_canonical_lists(adj, sizes, universe_cap) if adj else ():
        checked += 1
        if brute_force_colour(adj, lists) is None:
            # second, independent confirmation where full enumeration is cheap
            if len(adj) <= 8 and naive_colourable(adj, lists):
                raise AssertionError(f"backtracker and naive enumeration disagree on {lists}")
            return Verdict(
                Status.COUNTEREXAMPLE,
                {"adjacency": adj, "lists": lists},
                {"assignments": checked, "universe_cap": universe_cap, "seconds": time.perf_counter() - t0},
            )
    status = Status.ALL_COLOURABLE if (not adj or universe_cap >= total) else Status.CAPPED
    return Verdict(
        status,
        None,
        {
            "assignments": checked,
            "core_size": len(adj),
            "universe_cap": universe_cap,
            "seconds": time.perf_counter() - t0,
        },
    )


def independent_sets(adj: Adjacency, maximal_only: bool) -> list[frozenset[int]]:
    adj = _adjacency(adj)
    verts = sorted(adj)
    out: list[frozenset[int]] = []

    def rec(i: int, chosen: list[int], blocked: set[int]):
        if i == len(verts):
            out.append(frozenset(chosen))
            return
        v = verts[i]
        if v not in blocked:
            chosen.append(v)
            rec(i + 1, chosen, blocked | set(adj[v]))
            chosen.pop()
        rec(i + 1, chosen, blocked)

    rec(0, [], set())
    if maximal_only:
        out = [s for s in out if all(v in s or any(w in s for w in adj[v]) for v in verts)]
    return out


def verify_theorem1_sweep(
    g: PlaneGraph,
    mode: str = "maximal",
    universe_cap: int = 6,
    prune: bool = True,
) -> Verdict:
    """Check every independent set of ``g`` (all, or maximal only) is 3-sufficient.

    Raises:
        TargetError: ``NOT_TRIANGLE_FREE``.
    """
    if mode not in ("maximal", "all"):
        raise ValueError("mode must be 'maximal' or 'all'")
    if not is_triangle_free(g):
        raise TargetError("NOT_TRIANGLE_FREE", "sweep needs a triangle-free graph")
    t0 = time.perf_counter()
    sets = independent_sets(g.rotation, maximal_only=mode == "maximal")
    assignments = 0
    capped = False
    for x in sets:
        v = verify_k_sufficient(SufficiencyQuery(g, x, 3), universe_cap, prune=prune)
        assignments += v.stats.get("assignments", 0)
        if v.status is Status.COUNTEREXAMPLE:
            v.stats.update(x_set=sorted(x))
            return v
        capped |= v.status is Status.CAPPED
    return Verdict(
        Status.CAPPED if capped else Status.ALL_COLOURABLE,
        None,
        {
            "independent_sets": len(sets),
            "assignments": assignments,
            "universe_cap": universe_cap,
            "seconds": time.perf_counter() - t0,
        },
    )


def _sweep_one(args):
    g, mode, cap, prune = args
    return verify_theorem1_sweep(g, mode, cap, prune)


def sweep_corpus(
    graphs: Iterable[PlaneGraph],
    mode: str = "maximal",
    universe_cap: int = 6,
    prune: bool = True,
    jobs: int = 1,
    checkpoint: str | None = None,
) -> Verdict:
    """Run :func:`verify_theorem1_sweep` over a corpus and aggregate.

    ``checkpoint`` names a text file with one completed graph index per line;
    indices already listed are skipped, new ones appended as they finish.
    """
    t0 = time.perf_counter()
    graphs = list(graphs)
    done: set[int] = set()
    if checkpoint:
        try:
            with open(checkpoint) as fh:
                done = {int(line.split()[0]) for line in fh if line.strip()}
        except FileNotFoundError:
            pass
    todo = [i for i in range(len(graphs)) if i not in done]
    work = [(graphs[i], mode, universe_cap, prune) for i in todo]
    if jobs > 1 and len(work) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_sweep_one, work, chunksize=8)
            verdicts = _consume(todo, results, checkpoint)
    else:
        verdicts = _consume(todo, map(_sweep_one, work), checkpoint)
    stats = {
        "graphs": len(graphs),
        "skipped_from_checkpoint": len(done),
        "independent_sets": 0,
        "assignments": 0,
        "universe_cap": universe_cap,
        "mode": mode,
        "pruned": prune,
    }
    capped = False
    for idx, v in verdicts:
        if v.status is Status.COUNTEREXAMPLE:
            v.stats["graph_index"] = idx
            return v
        stats["independent_sets"] += v.stats["independent_sets"]
        stats["assignments"] += v.stats["assignments"]
        capped |= v.status is Status.CAPPED
    secs = time.perf_counter() - t0
    stats["seconds"] = secs
    stats["graphs_per_second"] = (len(todo) / secs) if secs > 0 else None
    stats["assignments_per_second"] = (stats["assignments"] / secs) if secs > 0 else None
    return Verdict(Status.CAPPED if capped else Status.ALL_COLOURABLE, None, stats)


def _consume(indices, results, checkpoint):
    out = []
    fh = open(checkpoint, "a") if checkpoint else None
    try:
        for idx, v in zip(indices, results):
            out.append((idx, v))
            if fh:
                fh.write(f"{idx} {v.status.value}\n")
                fh.flush()
            if v.status is Status.COUNTEREXAMPLE:
                break
    finally:
        if fh:
            fh.close()
    return out
