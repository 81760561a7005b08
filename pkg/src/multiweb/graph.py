"""Finite simple graphs with 1-based vertex indices.

Edges are stored as sorted pairs ``(i, j)`` with ``i < j`` and the edge list
is kept in lexicographic order, so edge indices are reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InvalidArgument, InvalidEdge


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def to_dict(self) -> dict:
        return {"vertex_count": self.vertex_count, "edges": [list(e) for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def make_graph(vertex_count, edge_list, labels=None) -> Graph:
    if int(vertex_count) != vertex_count or vertex_count < 0:
        raise InvalidArgument(f"vertex_count must be a nonnegative integer, got {vertex_count!r}")
    vertex_count = int(vertex_count)
    seen = set()
    for k, edge in enumerate(edge_list):
        if len(edge) != 2:
            raise InvalidEdge(f"edge #{k} {edge!r} does not have two endpoints", index=k)
        i, j = (int(x) for x in edge)
        if not (1 <= i <= vertex_count and 1 <= j <= vertex_count):
            raise InvalidEdge(
                f"edge #{k} {edge!r} has an endpoint outside 1..{vertex_count}", index=k)
        if i == j:
            raise InvalidEdge(f"edge #{k} {edge!r} is a self-loop", index=k)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise InvalidEdge(f"edge #{k} {edge!r} is a duplicate", index=k)
        seen.add(key)
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != vertex_count:
            raise InvalidArgument("labels must name every vertex")
    return Graph(vertex_count, tuple(sorted(seen)), labels)


def make_cycle(L: int) -> Graph:
    """Cycle v_1 ... v_L. L=1 is an isolated vertex and L=2 a single edge."""
    if int(L) != L or L < 1:
        raise InvalidArgument(f"cycle length must be a positive integer, got {L!r}")
    L = int(L)
    if L == 1:
        return make_graph(1, [])
    edges = {(min(i, i % L + 1), max(i, i % L + 1)) for i in range(1, L + 1)}
    return make_graph(L, sorted(edges))


def make_path(n: int) -> Graph:
    if int(n) != n or n < 0:
        raise InvalidArgument(f"path length must be a nonnegative integer, got {n!r}")
    n = int(n)
    return make_graph(n, [(i, i + 1) for i in range(1, n)])


def make_complete_bipartite(a: int, b: int) -> Graph:
    return make_graph(a + b, [(i, a + j) for i in range(1, a + 1) for j in range(1, b + 1)])


def recognize(g: Graph) -> tuple[str, int] | None:
    """``("path", n)`` or ``("cycle", L)`` when ``g`` is exactly the builtin family member."""
    if g == make_path(g.vertex_count):
        return ("path", g.vertex_count)
    if g.vertex_count >= 1 and g == make_cycle(g.vertex_count):
        return ("cycle", g.vertex_count)
    return None


def _locate_edge(text: str, k: int) -> tuple[int, int]:
    """Line/column (1-based) of the k-th entry of the top-level "edges" array."""
    start = text.find('"edges"')
    if start < 0:
        return (1, 1)
    pos = text.find("[", start)
    depth, count = 0, -1
    for idx in range(pos, len(text)):
        ch = text[idx]
        if ch == "[":
            depth += 1
            if depth == 2:
                count += 1
                if count == k:
                    line = text.count("\n", 0, idx) + 1
                    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
                    return (line, col)
        elif ch == "]":
            depth -= 1
            if depth == 0:
                break
    return (1, 1)


def graph_from_json(text: str) -> Graph:
    """Parse ``{"vertex_count": int, "edges": [[i, j], ...]}``.

    Errors carry ``line:col`` of the offending token.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict) or "vertex_count" not in data or "edges" not in data:
        raise InvalidArgument("1:1: expected an object with keys 'vertex_count' and 'edges'")
    n = data["vertex_count"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        line = text.count("\n", 0, max(text.find('"vertex_count"'), 0)) + 1
        raise InvalidArgument(f"{line}:1: vertex_count must be a nonnegative integer")
    edges = data["edges"]
    if not isinstance(edges, list):
        raise InvalidArgument("1:1: 'edges' must be a list")
    for k, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2
                and all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
            line, col = _locate_edge(text, k)
            raise InvalidEdge(f"{line}:{col}: edge #{k} must be a pair of integers")
    try:
        return make_graph(n, edges)
    except InvalidEdge as exc:
        line, col = _locate_edge(text, exc.index)
        raise InvalidEdge(f"{line}:{col}: {exc}", index=exc.index) from None
