"""Tiling polynomials and exact partition functions.

``Z_{w,n,N}`` is the coefficient of ``x^n`` in ``P(x)^N``.  It is extracted by
dynamic programming over colors on the box ``0 <= r <= n`` of residual vertex
multiplicities; the zero-vertex multiplicity is implied by homogeneity.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InfeasibleMultiplicity, InvalidArgument, ResourceLimit
from .tiles import HomogenizedTile, Tile, homogenize, incidence_matrix

DEFAULT_MAX_STATES = 10**8
_RESCALE_ABOVE = 2.0**800


class SparsePolynomial:
    """Finite map from exponent vectors to nonzero coefficients."""

    def __init__(self, terms=None, nvars=None):
        self.terms: dict[tuple[int, ...], object] = {}
        for exp, c in (terms or {}).items():
            if c != 0:
                self.terms[tuple(int(e) for e in exp)] = c
        if nvars is None:
            nvars = len(next(iter(self.terms))) if self.terms else 0
        self.nvars = nvars

    def __eq__(self, other):
        return isinstance(other, SparsePolynomial) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        parts = []
        for exp, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(exp) if e)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return "SparsePolynomial(" + " + ".join(parts) + ")"

    def degrees(self) -> set[int]:
        return {sum(exp) for exp in self.terms}

    def is_homogeneous(self, degree=None) -> bool:
        d = self.degrees()
        return len(d) <= 1 and (degree is None or d <= {degree})

    def evaluate(self, x):
        total = 0
        for exp, c in self.terms.items():
            term = c
            for xi, e in zip(x, exp):
                if e:
                    term = term * xi**e
            total = total + term
        return total

    def reduce(self, groups: Sequence[Sequence[int]]) -> "SparsePolynomial":
        return reduced_polynomial(self, groups)


def _weights(w, count):
    if w is None:
        return [1] * count
    w = list(w)
    if len(w) != count:
        raise InvalidArgument(f"expected {count} tile weights, got {len(w)}")
    if any(not (x > 0) for x in w):
        raise InvalidArgument("tile weights must be strictly positive")
    return w


def tiling_polynomial(tiles: Sequence[HomogenizedTile], w=None) -> SparsePolynomial:
    """Homogenized tiling polynomial sum_t w(t) prod_v x_v^{t_v} over variables x_0..x_V."""
    if tiles and isinstance(tiles[0], Tile):
        tiles = homogenize(tiles, tiles[0].vertex_count)
    w = _weights(w, len(tiles))
    terms: dict[tuple[int, ...], object] = defaultdict(int)
    for ht, wt in zip(tiles, w):
        terms[ht.vector] += wt
    nvars = len(tiles[0].vector) if tiles else 1
    poly = SparsePolynomial(terms, nvars)
    if tiles:
        V = sum(tiles[0].vector)
        assert poly.is_homogeneous(V), "tiling polynomial must be homogeneous of degree V"
    return poly


def reduced_polynomial(poly: SparsePolynomial, groups: Sequence[Sequence[int]]) -> SparsePolynomial:
    """Identify the variables inside each group; group k becomes variable k."""
    owner = {}
    for k, grp in enumerate(groups):
        for i in grp:
            if i in owner:
                raise InvalidArgument(f"variable {i} appears in two groups")
            owner[i] = k
    if set(owner) != set(range(poly.nvars)):
        raise InvalidArgument("groups must partition the variable indices")
    terms: dict[tuple[int, ...], object] = defaultdict(int)
    for exp, c in poly.terms.items():
        new = [0] * len(groups)
        for i, e in enumerate(exp):
            new[owner[i]] += e
        terms[tuple(new)] += c
    return SparsePolynomial(terms, len(groups))


def _vertex_columns(tiles) -> np.ndarray:
    """Vertex multiplicities without the zero vertex, shape (V, T)."""
    if isinstance(tiles, np.ndarray):
        return np.asarray(tiles[1:], dtype=np.int64)
    return incidence_matrix(list(tiles))[1:]


class ZTable:
    """DP layers ``Z_{w, r, k}`` for all ``0 <= r <= n`` and the last ``keep`` values of k."""

    def __init__(self, tiles, w, n, N, exact=False, keep=1, max_states=DEFAULT_MAX_STATES):
        cols = _vertex_columns(tiles)
        V, T = cols.shape
        n = tuple(int(x) for x in n)
        if len(n) != V:
            raise InvalidArgument(f"multiplicity vector has length {len(n)}, graph has {V} vertices")
        if min(n, default=0) < 0 or N < 0:
            raise InvalidArgument("multiplicities and N must be nonnegative")
        states = math.prod(k + 1 for k in n)
        if states * max(N, 1) > max_states:
            raise ResourceLimit(f"{states} states x {N} colors exceeds cap {max_states}")
        weights = _weights(w, T)
        if exact:
            weights = [Fraction(x) for x in weights]
            weights = [int(x) if x.denominator == 1 else x for x in weights]
        self.n, self.N, self.exact = n, N, exact
        self.cols = cols
        shape = tuple(k + 1 for k in n)
        dtype = object if exact else np.float64
        Z = np.zeros(shape, dtype=dtype)
        Z[(0,) * V] = 1
        layers = [(Z, 0)]
        moves = []
        for t in range(T):
            c = cols[:, t]
            if np.any(c > np.array(n, dtype=np.int64)):
                continue
            src = tuple(slice(0, k + 1 - ci) for k, ci in zip(n, c))
            dst = tuple(slice(ci, k + 1) for k, ci in zip(n, c))
            moves.append((src, dst, weights[t]))
        scale = 0
        for _ in range(N):
            new = np.zeros(shape, dtype=dtype)
            for src, dst, wt in moves:
                new[dst] += wt * Z[src] if wt != 1 else Z[src]
            if not exact:
                top = float(new.max()) if new.size else 0.0
                if top > _RESCALE_ABOVE:
                    shift = math.frexp(top)[1]
                    new = np.ldexp(new, -shift)
                    scale += shift
            Z = new
            layers.append((Z, scale))
            if len(layers) > keep:
                layers.pop(0)
        self._layers = {N - len(layers) + 1 + i: lay for i, lay in enumerate(layers)}

    def value(self, r, k):
        """Z at residual ``r`` with ``k`` colors (must be one of the kept layers)."""
        arr, scale = self._layers[k]
        r = tuple(int(x) for x in r)
        if any(x < 0 or x > m for x, m in zip(r, self.n)):
            return 0
        z = arr[r]
        if self.exact:
            return z
        return math.ldexp(float(z), scale) if z and scale else float(z)

    def log_value(self, r, k):
        arr, scale = self._layers[k]
        r = tuple(int(x) for x in r)
        if any(x < 0 or x > m for x, m in zip(r, self.n)):
            return -math.inf
        z = arr[r]
        if z == 0:
            return -math.inf
        if self.exact:
            return math.log(Fraction(z)) if isinstance(z, Fraction) else math.log(z)
        return math.log(float(z)) + scale * math.log(2.0)

    def ratio(self, r1, k1, r2, k2):
        """Z(r1, k1) / Z(r2, k2) without overflow."""
        a1, s1 = self._layers[k1]
        a2, s2 = self._layers[k2]
        r1 = tuple(int(x) for x in r1)
        if any(x < 0 or x > m for x, m in zip(r1, self.n)):
            return 0
        num, den = a1[r1], a2[tuple(int(x) for x in r2)]
        if self.exact:
            return Fraction(num) / Fraction(den)
        return math.ldexp(float(num) / float(den), s1 - s2)


def zero_multiplicity(tiles, n, N) -> int:
    """n_0 = N*V - sum_v n_v."""
    V = _vertex_columns(tiles).shape[0]
    return N * V - sum(int(x) for x in n)


def partition_function_exact(tiles, w, n, N, exact=False, max_states=DEFAULT_MAX_STATES):
    """Z_{w,n,N}; 0 when n is infeasible.  ``exact=True`` uses integers/fractions."""
    if N < 1:
        raise InvalidArgument("N must be at least 1")
    if zero_multiplicity(tiles, n, N) < 0:
        return 0 if exact else 0.0
    table = ZTable(tiles, w, n, N, exact=exact, keep=1, max_states=max_states)
    return table.value(n, N)


def log_partition_function(tiles, w, n, N, max_states=DEFAULT_MAX_STATES) -> float:
    if zero_multiplicity(tiles, n, N) < 0:
        return -math.inf
    table = ZTable(tiles, w, n, N, keep=1, max_states=max_states)
    return table.log_value(n, N)


def exact_moments(tiles, w, n, N, exact=False, max_states=DEFAULT_MAX_STATES):
    """Exact mean vector and second-moment matrix E(X_t X_t') of tile counts.

    Uses E(X_t) = N w(t) Z(n - t, N-1) / Z(n, N) and
    E(X_t X_t') = delta_tt' E(X_t) + E(X_t) E*(X_t'), where E* is taken on
    (n - t, N - 1).
    """
    if N < 1:
        raise InvalidArgument("N must be at least 1")
    cols = _vertex_columns(tiles)
    T = cols.shape[1]
    weights = _weights(w, T)
    if exact:
        weights = [Fraction(x) for x in weights]
    table = ZTable(tiles, w, n, N, exact=exact, keep=3, max_states=max_states)
    n = np.array(table.n, dtype=np.int64)
    if table.value(n, N) == 0:
        raise InfeasibleMultiplicity(f"no multiweb with multiplicities {tuple(int(x) for x in n)} and N={N}")
    dtype = object if exact else np.float64
    zero = Fraction(0) if exact else 0.0
    mean = np.full(T, zero, dtype=dtype)
    second = np.full((T, T), zero, dtype=dtype)
    for a in range(T):
        ra = n - cols[:, a]
        if ra.min() < 0:
            continue
        mean[a] = N * weights[a] * table.ratio(ra, N - 1, n, N)
        if mean[a] == 0:
            continue
        second[a, a] += mean[a]
        if N < 2:
            continue
        for b in range(T):
            rb = ra - cols[:, b]
            if rb.min() < 0:
                continue
            star = (N - 1) * weights[b] * table.ratio(rb, N - 2, ra, N - 1)
            second[a, b] += mean[a] * star
    return mean, second


def exact_covariance(tiles, w, n, N, exact=False, max_states=DEFAULT_MAX_STATES):
    mean, second = exact_moments(tiles, w, n, N, exact=exact, max_states=max_states)
    return mean, second - np.outer(mean, mean)
