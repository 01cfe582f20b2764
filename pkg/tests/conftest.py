import pytest

from tfplc.plane import build_plane_graph

HEXAGON_CENTER_ROT = {
    1: (2, 7, 6), 2: (3, 1), 3: (4, 7, 2), 4: (5, 3),
    5: (6, 7, 4), 6: (1, 5), 7: (1, 3, 5),
}


def cycle_graph(n: int):
    """Cycle 1..n with the outer face walked 1, 2, ..., n."""
    rot = {i: (i % n + 1, (i - 2) % n + 1) for i in range(1, n + 1)}
    return build_plane_graph(rot, tuple(range(1, n + 1)))


def path_graph(n: int):
    rot = {i: tuple(j for j in (i + 1, i - 1) if 1 <= j <= n) for i in range(1, n + 1)}
    return build_plane_graph(rot)


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def hexagon_center():
    return build_plane_graph(HEXAGON_CENTER_ROT, (1, 2, 3, 4, 5, 6))


@pytest.fixture
def cube():
    rot = {
        1: (2, 4, 5), 2: (3, 1, 6), 3: (4, 2, 7), 4: (1, 3, 8),
        5: (8, 6, 1), 6: (5, 7, 2), 7: (6, 8, 3), 8: (7, 5, 4),
    }
    from tfplc.plane import _trace_faces

    _, faces, _ = _trace_faces(rot)
    return build_plane_graph(rot, tuple(d[0] for d in faces[0]))


def plane_from_edges(edges, outer):
    """Embed an edge list with networkx and make ``outer`` the outer face."""
    import networkx as nx

    h = nx.Graph(list(edges))
    ok, emb = nx.check_planarity(h)
    assert ok
    rot = {v: tuple(emb.neighbors_cw_order(v)) for v in h}
    return build_plane_graph(rot, tuple(outer))


def cycle_edges(n: int):
    return [(i, i % n + 1) for i in range(1, n + 1)]


def fan_adjacency(q: int):
    """Semi-fan with center 0 and rim 1..2q+1."""
    rim = list(range(1, 2 * q + 2))
    adj = {v: set() for v in [0] + rim}
    for a, b in zip(rim, rim[1:]):
        adj[a].add(b)
        adj[b].add(a)
    for y in rim[::2]:
        adj[0].add(y)
        adj[y].add(0)
    return {v: tuple(sorted(n)) for v, n in adj.items()}


def fan_sizes(q: int):
    """List sizes one above the reference out-degrees; q = 1 uses a 4-cycle pattern."""
    if q == 1:
        return {0: 4, 1: 2, 2: 3, 3: 2}
    n = 2 * q + 1
    sizes = {0: 4}
    for i in range(1, n + 1):
        sizes[i] = 1 if i in (1, n) else (2 if i % 2 == 0 else 3)
    return sizes


def brute_chords(g, i):
    walk = g.outer_face
    pos = {v: j for j, v in enumerate(walk)}
    n = len(walk)
    bnd = set(walk)
    out = set()
    for path in simple_paths(g, i):
        a, b = path[0], path[-1]
        if a not in bnd or b not in bnd or any(x in bnd for x in path[1:-1]):
            continue
        if (pos[a] - pos[b]) % n in (1, n - 1):
            continue
        out.add(min(path, path[::-1]))
    return sorted(out)


def simple_paths(g, length):
    def rec(path):
        if len(path) == length + 1:
            yield tuple(path)
            return
        for w in g.neighbours(path[-1]):
            if w not in path:
                path.append(w)
                yield from rec(path)
                path.pop()

    for v in g.vertices:
        yield from rec([v])

ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> bool:
    """Note one acceptance verdict for the end-of-run summary."""
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
