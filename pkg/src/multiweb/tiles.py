"""Tiles (partial matchings) of a graph and their homogenized form."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ResourceLimit
from .fibonacci import cycle_matchings, path_matchings
from .graph import Graph, recognize

DEFAULT_TILE_CAP = 10**7


@dataclass(frozen=True)
class Tile:
    """A partial matching, given by indices into ``Graph.edges``."""

    edges: tuple[int, ...]
    vertices: tuple[int, ...]
    vertex_count: int

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def multiplicity(self) -> tuple[int, ...]:
        """t_v for v = 1..V."""
        covered = set(self.vertices)
        return tuple(int(v in covered) for v in range(1, self.vertex_count + 1))


@dataclass(frozen=True)
class HomogenizedTile:
    tile: Tile
    zero_multiplicity: int

    @property
    def size(self) -> int:
        return self.tile.size

    @property
    def vector(self) -> tuple[int, ...]:
        """Multiplicities indexed v_0, v_1, ..., v_V; they sum to V."""
        return (self.zero_multiplicity,) + self.tile.multiplicity


def tile_sort_key(t: Tile):
    return (t.size, t.vertices)


def enumerate_tiles(g: Graph, cap: int = DEFAULT_TILE_CAP) -> list[Tile]:
    """All partial matchings of ``g``, ordered by size then by sorted vertex indices."""
    edges = g.edges
    out: list[Tile] = []

    def visit(start: int, chosen: list[int], used: int):
        if len(out) >= cap:
            raise ResourceLimit(f"more than {cap} tiles")
        verts = tuple(sorted(v for e in chosen for v in edges[e]))
        out.append(Tile(tuple(chosen), verts, g.vertex_count))
        for k in range(start, len(edges)):
            i, j = edges[k]
            mask = (1 << i) | (1 << j)
            if used & mask:
                continue
            chosen.append(k)
            visit(k + 1, chosen, used | mask)
            chosen.pop()

    visit(0, [], 0)
    out.sort(key=tile_sort_key)
    return out


def homogenize(tiles: list[Tile], V: int) -> list[HomogenizedTile]:
    out = []
    for t in tiles:
        z = V - 2 * t.size
        if z < 0:
            raise ValueError(f"tile of size {t.size} does not fit in {V} vertices")
        out.append(HomogenizedTile(t, z))
    return out


def incidence_matrix(tiles: list[Tile] | list[HomogenizedTile], V: int | None = None) -> np.ndarray:
    """Integer matrix D with rows v_0..v_V and one column per tile, D[v, t] = t_v."""
    if tiles and isinstance(tiles[0], Tile):
        V = tiles[0].vertex_count if V is None else V
        tiles = homogenize(tiles, V)
    if not tiles:
        return np.zeros((1 if V is None else V + 1, 0), dtype=np.int64)
    return np.array([ht.vector for ht in tiles], dtype=np.int64).T


def _count_general(g: Graph, cap: int) -> int:
    adj = {v: set() for v in g.vertices}
    for i, j in g.edges:
        adj[i].add(j)
        adj[j].add(i)

    @lru_cache(maxsize=None)
    def count(remaining: frozenset) -> int:
        if count.cache_info().currsize > cap:
            raise ResourceLimit(f"matching count exceeded {cap} memo states")
        if not remaining:
            return 1
        v = min(remaining)
        rest = remaining - {v}
        total = count(rest)
        for u in adj[v] & rest:
            total += count(rest - {u})
        return total

    return count(frozenset(g.vertices))


def count_tiles(g: Graph, cap: int = DEFAULT_TILE_CAP) -> int:
    """|T(g)| as an exact integer; closed recurrences for paths and cycles."""
    kind = recognize(g)
    if kind is not None:
        family, n = kind
        return path_matchings(n) if family == "path" else cycle_matchings(n)
    return _count_general(g, cap)
