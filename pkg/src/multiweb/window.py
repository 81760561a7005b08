"""Local configurations on a five-vertex window of the odd cycle.

Window vertices are w_1..w_5 = v_s..v_{s+4} (indices mod L, default s = 1).
Window edge k, k = 0..5, joins w_k and w_{k+1}, so edges 0 and 5 are the
endmost edges reaching outside the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .cycle import inverse_laplacian_closed
from .errors import InvalidArgument, WindowWraps
from .fibonacci import fibonacci as F
from .fibonacci import lucas
from .graph import make_cycle
from .laplacian import GaussianLaw, gaussian_law, pseudo_inverse_on_image
from .tiles import Tile, enumerate_tiles, incidence_matrix

WINDOW_EDGES = 6
MIN_LENGTH = 11
PHI = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True)
class LocalConfiguration:
    edges: tuple[int, ...]

    @property
    def f(self) -> int:
        return len(self.edges)

    @property
    def epsilon(self) -> int:
        return (0 in self.edges) + (WINDOW_EDGES - 1 in self.edges)

    def reflected(self) -> "LocalConfiguration":
        return LocalConfiguration(tuple(sorted(WINDOW_EDGES - 1 - e for e in self.edges)))

    def label(self) -> str:
        return "{" + ",".join(str(e) for e in self.edges) + "}"


def enumerate_local_configs() -> list[LocalConfiguration]:
    """The 21 window edge subsets covering each window vertex at most once, by (f, lex)."""
    out = [LocalConfiguration(c)
           for r in range(WINDOW_EDGES + 1)
           for c in combinations(range(WINDOW_EDGES), r)
           if all(b - a > 1 for a, b in zip(c, c[1:]))]
    assert len(out) == 21
    return out


def _check_length(L: int) -> int:
    if int(L) != L or L % 2 == 0:
        raise InvalidArgument(f"cycle length must be odd, got {L!r}")
    if L < MIN_LENGTH:
        raise WindowWraps(f"window needs L >= {MIN_LENGTH}, got {L}")
    return int(L)


def _vertex(L: int, start: int, k: int) -> int:
    """1-based cycle vertex w_k of the window starting at v_start."""
    return (start - 1 + k - 1) % L + 1


def window_edge_pairs(L: int, start: int = 1) -> list[tuple[int, int]]:
    pairs = []
    for k in range(WINDOW_EDGES):
        a, b = _vertex(L, start, k), _vertex(L, start, k + 1)
        pairs.append((min(a, b), max(a, b)))
    return pairs


def class_size(L: int, config: LocalConfiguration) -> int:
    """F_{L - epsilon - 4}: matchings of the free path outside the window."""
    return F(L - config.epsilon - 4)


def classify_tiles(L: int, tiles: list[Tile], start: int = 1) -> np.ndarray:
    """0/1 matrix B (configurations x tiles) of the quotient by window restriction.

    ``tiles`` must be tiles of ``make_cycle(L)``.
    """
    L = _check_length(L)
    configs = enumerate_local_configs()
    index = {c.edges: j for j, c in enumerate(configs)}
    graph_edges = make_cycle(L).edges
    wpairs = window_edge_pairs(L, start)
    B = np.zeros((len(configs), len(tiles)), dtype=np.int64)
    for t_idx, tile in enumerate(tiles):
        pairs = {graph_edges[e] for e in tile.edges}
        key = tuple(k for k, p in enumerate(wpairs) if p in pairs)
        B[index[key], t_idx] = 1
    sizes = B.sum(axis=1)
    expected = [class_size(L, c) for c in configs]
    assert list(sizes) == expected, "class sizes must be F_{L - eps - 4}"
    assert sum(expected) == lucas(L)
    return B


def window_incidence(L: int, start: int = 1) -> list[list[int]]:
    """Exact B D^T (configurations x v_0..v_L) without enumerating tiles.

    Entry (j, v) is the number of tiles in class j covering v.  Outside the
    window the tiles of a class are the matchings of a free path of
    n = L - 5 - eps vertices, and a path matching avoids position p in
    F_p * F_{n-p+1} ways.
    """
    L = _check_length(L)
    rows = []
    for config in enumerate_local_configs():
        size = class_size(L, config)
        row = [0] * (L + 1)
        covered = set()
        for k in config.edges:
            covered |= {_vertex(L, start, k), _vertex(L, start, k + 1)}
        first = 7 if 5 in config.edges else 6
        last = -1 if 0 in config.edges else 0
        n = L - 5 - config.epsilon
        assert last - first + L + 1 == n
        for v in covered:
            row[v] = size
        for p in range(1, n + 1):
            v = _vertex(L, start, first + p - 1)
            row[v] = size - F(p) * F(n - p + 1)
        row[0] = L * size - sum(row[1:])
        rows.append(row)
    return rows


def local_law(L: int, N: float = 1.0, start: int = 1, method: str = "closed") -> GaussianLaw:
    """Gaussian law of the window class counts S = B X at the critical density.

    ``method="closed"`` uses the closed-form inverse Laplacian and the
    combinatorial B D^T; ``method="explicit"`` enumerates tiles and uses the
    numerical pseudo-inverse.
    """
    L = _check_length(L)
    T = lucas(L)
    configs = enumerate_local_configs()
    sizes = np.array([float(Fraction(class_size(L, c), T)) for c in configs])
    if method == "closed":
        M = np.array([[float(Fraction(x, T)) for x in row] for row in window_incidence(L, start)])
        inv = inverse_laplacian_closed(L, scale=T)
    elif method == "explicit":
        tiles = enumerate_tiles(make_cycle(L))
        D = incidence_matrix(tiles).astype(float)
        B = classify_tiles(L, tiles, start).astype(float)
        M = B @ D.T / T
        inv = pseudo_inverse_on_image(D @ D.T / T)
    else:
        raise InvalidArgument(f"unknown method {method!r}")
    cov = N * (np.diag(sizes) - M @ inv @ M.T)
    cov = 0.5 * (cov + cov.T)
    law = GaussianLaw(N * sizes, cov, N)
    law.check()
    return law


def local_law_from_tiles(L: int, N: float = 1.0, start: int = 1) -> GaussianLaw:
    """B Cov(X) B^T with Cov(X) from the general Gaussian law at uniform weights."""
    L = _check_length(L)
    tiles = enumerate_tiles(make_cycle(L))
    D = incidence_matrix(tiles)
    C = np.full(len(tiles), 1.0 / len(tiles))
    law_x = gaussian_law(D, C, N)
    B = classify_tiles(L, tiles, start).astype(float)
    return GaussianLaw(B @ law_x.mean, B @ law_x.covariance @ B.T, N)


def local_limits(epsilon: int, f: int, N: float = 1.0) -> tuple[float, float]:
    """L -> infinity limits of E(S_j) and Var(S_j)."""
    if epsilon not in (0, 1, 2) or not (0 <= f <= 3) or epsilon > f:
        raise InvalidArgument(f"no configuration has epsilon={epsilon}, f={f}")
    mean = N * PHI ** (-epsilon - 4) / math.sqrt(5)
    var = mean * (1 - (epsilon + f / PHI + (11 + math.sqrt(5)) / 2) / PHI ** (epsilon + 6))
    return mean, var
