"""Text instance files and planar_code streams.

Instance files are line based::

    n 4
    rot 1: 2 4
    rot 2: 3 1
    rot 3: 4 2
    rot 4: 1 3
    outer: 1 2 3 4
    P: 1
    L 1: 1
    L 2: 1 2

``#`` starts a comment.  ``outer`` may repeat, one walk per component.
Without ``L`` lines the file describes a bare plane graph.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import EmbeddingError, FormatError
from .plane import PlaneGraph, _components, _trace_faces, build_plane_graph
from .target import Target, make_target

HEADER = b">>planar_code<<"


def _ints(text: str, lineno: int) -> list[int]:
    try:
        return [int(x) for x in text.split()]
    except ValueError:
        raise FormatError("PARSE_ERROR", f"expected integers, got {text.strip()!r}", lineno)


def parse_instance(text: str) -> Target | PlaneGraph:
    """Parse an instance file.

    Raises:
        FormatError: ``PARSE_ERROR`` with the offending line number, or
            ``MISSING_LIST`` naming a vertex without an ``L`` line.
        EmbeddingError, TargetError: from graph or target construction.
    """
    n = None
    rot: dict[int, list[int]] = {}
    outer: list[list[int]] = []
    p: list[int] | None = None
    lists: dict[int, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        words = head.split()
        if not sep:
            if len(words) == 2 and words[0] == "n":
                n = _ints(words[1], lineno)[0]
                continue
            raise FormatError("PARSE_ERROR", f"unrecognised line {line!r}", lineno)
        if words == ["outer"]:
            outer.append(_ints(rest, lineno))
        elif words == ["P"]:
            if p is not None:
                raise FormatError("PARSE_ERROR", "duplicate P line", lineno)
            p = _ints(rest, lineno)
        elif len(words) == 2 and words[0] in ("rot", "L"):
            v = _ints(words[1], lineno)[0]
            table = rot if words[0] == "rot" else lists
            if v in table:
                raise FormatError("PARSE_ERROR", f"duplicate {words[0]} line for vertex {v}", lineno)
            table[v] = _ints(rest, lineno)
        else:
            raise FormatError("PARSE_ERROR", f"unrecognised line {line!r}", lineno)
    if n is None:
        raise FormatError("PARSE_ERROR", "missing 'n' line")
    if len(rot) != n:
        raise FormatError("PARSE_ERROR", f"n is {n} but {len(rot)} rot lines given")
    g = build_plane_graph(rot, outer if outer else None)
    if not lists and p is None:
        return g
    for v in g.vertices:
        if v not in lists:
            raise FormatError("MISSING_LIST", f"vertex {v} has no L line")
    return make_target(g, p or (), lists)


def _min_rotation(walk: tuple[int, ...]) -> tuple[int, ...]:
    return min(walk[i:] + walk[:i] for i in range(len(walk)))


def format_instance(obj: Target | PlaneGraph) -> str:
    """Inverse of :func:`parse_instance` up to whitespace and comments."""
    g = obj.graph if isinstance(obj, Target) else obj
    out = [f"n {len(g)}"]
    for v in sorted(g.vertices):
        out.append(f"rot {v}: " + " ".join(map(str, g.neighbours(v))))
    for walk in g.outer_faces:
        if len(walk) > 1:
            out.append("outer: " + " ".join(map(str, _min_rotation(walk))))
    if isinstance(obj, Target):
        out.append("P: " + " ".join(map(str, obj.p)))
        for v in sorted(g.vertices):
            out.append(f"L {v}: " + " ".join(map(str, sorted(obj.lists[v]))))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# planar_code
# ---------------------------------------------------------------------------


def _first_faces(rot: dict[int, tuple[int, ...]]) -> list[tuple[int, ...]]:
    _, faces, face_of = _trace_faces(rot)
    walks = []
    for comp in _components(rot):
        if len(comp) == 1:
            continue
        fid = min(face_of[(v, w)] for v in comp for w in rot[v])
        walks.append(tuple(d[0] for d in faces[fid]))
    return walks


def read_planar_code(data: bytes, outer: str = "first") -> Iterator[PlaneGraph]:
    """Decode a planar_code stream.

    Args:
        data: the raw bytes, with or without the ``>>planar_code<<`` header.
        outer: ``"first"`` uses the first traced face of each component as
            the outer face; ``"largest"`` uses a longest face.

    Raises:
        FormatError: ``BAD_HEADER`` or ``TRUNCATED``.
    """
    i = 0
    if data.startswith(b">>"):
        end = data.find(b"<<")
        if end < 0 or data[: end + 2] != HEADER:
            raise FormatError("BAD_HEADER", repr(data[:20]))
        i = end + 2
    while i < len(data):
        n = data[i]
        i += 1
        rot: dict[int, tuple[int, ...]] = {}
        for v in range(1, n + 1):
            nb = []
            while True:
                if i >= len(data):
                    raise FormatError("TRUNCATED", f"graph ended inside vertex {v}")
                b = data[i]
                i += 1
                if b == 0:
                    break
                nb.append(b)
            rot[v] = tuple(nb)
        if outer == "largest":
            _, faces, face_of = _trace_faces(rot)
            walks = []
            for comp in _components(rot):
                if len(comp) > 1:
                    fid = max(sorted({face_of[(v, w)] for v in comp for w in rot[v]}), key=lambda f: len(faces[f]))
                    walks.append(tuple(d[0] for d in faces[fid]))
        else:
            walks = _first_faces(rot)
        yield build_plane_graph(rot, walks or None)


def write_planar_code(graphs: Iterable[PlaneGraph], header: bool = True) -> bytes:
    """Encode graphs; vertices are renumbered ``1..n`` in sorted order.

    Raises:
        FormatError: ``TOO_LARGE`` for graphs with 255 or more vertices.
    """
    out = bytearray(HEADER if header else b"")
    for g in graphs:
        verts = sorted(g.vertices)
        if len(verts) >= 255:
            raise FormatError("TOO_LARGE", f"{len(verts)} vertices")
        num = {v: i + 1 for i, v in enumerate(verts)}
        out.append(len(verts))
        for v in verts:
            out.extend(num[w] for w in g.neighbours(v))
            out.append(0)
    return bytes(out)


__all__ = [
    "EmbeddingError",
    "FormatError",
    "format_instance",
    "parse_instance",
    "read_planar_code",
    "write_planar_code",
]
