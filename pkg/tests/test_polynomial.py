import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multiweb.errors import InfeasibleMultiplicity, InvalidArgument, ResourceLimit
from multiweb.graph import make_cycle, make_graph, make_path
from multiweb.polynomial import (SparsePolynomial, exact_covariance, exact_moments, log_partition_function,
                                 partition_function_exact, reduced_polynomial, tiling_polynomial)
from multiweb.sampler import enumerate_multiwebs
from multiweb.tiles import enumerate_tiles, homogenize, incidence_matrix


def brute_force_Z(tiles, w, n, N):
    """Sum of prod w over all functions colors -> tiles with the vertex constraint."""
    cols = incidence_matrix(tiles)[1:]
    total = 0
    for f in product(range(len(tiles)), repeat=N):
        if np.array_equal(cols[:, list(f)].sum(axis=1), n):
            term = 1
            for t in f:
                term *= w[t]
            total += term
    return total


def test_cycle3_polynomial():
    p = tiling_polynomial(enumerate_tiles(make_cycle(3)))
    assert p.terms == {(3, 0, 0, 0): 1, (1, 1, 1, 0): 1, (1, 1, 0, 1): 1, (1, 0, 1, 1): 1}
    assert p.evaluate([1, 1, 1, 1]) == 4
    assert reduced_polynomial(p, [[0], [1, 2, 3]]).terms == {(3, 0): 1, (1, 2): 3}
    assert p.reduce([[0], [1], [2], [3]]) == p


def test_cycle5_reduced_polynomial():
    p = tiling_polynomial(enumerate_tiles(make_cycle(5)))
    assert p.reduce([[0], [1, 2, 3, 4, 5]]).terms == {(5, 0): 1, (3, 2): 5, (1, 4): 5}


def test_single_vertex_polynomial():
    p = tiling_polynomial(enumerate_tiles(make_path(1)))
    assert p.terms == {(1, 0): 1}


def test_reduce_rejects_bad_partition():
    p = tiling_polynomial(enumerate_tiles(make_cycle(3)))
    with pytest.raises(InvalidArgument):
        p.reduce([[0, 1], [1, 2, 3]])
    with pytest.raises(InvalidArgument):
        p.reduce([[0], [1, 2]])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), st.lists(st.integers(1, 5), min_size=40, max_size=40))
def test_polynomial_is_homogeneous_and_counts_tiles(L, ws):
    tiles = enumerate_tiles(make_cycle(L))
    w = ws[:len(tiles)] if len(tiles) <= 40 else None
    p = tiling_polynomial(tiles, w)
    assert p.is_homogeneous(L)
    assert p.evaluate([1] * (L + 1)) == sum(w)


@pytest.mark.parametrize("n, N, expected", [((0, 0, 0), 1, 1), ((1, 1, 0), 1, 1), ((1, 1, 1), 1, 0),
                                            ((1, 1, 1), 3, 0), ((2, 2, 2), 4, 24), ((0, 0, 0), 2, 1)])
def test_cycle3_partition_function(n, N, expected):
    tiles = enumerate_tiles(make_cycle(3))
    assert partition_function_exact(tiles, None, n, N, exact=True) == expected
    assert brute_force_Z(tiles, [1] * 4, n, N) == expected


@st.composite
def instances(draw):
    g = draw(st.sampled_from([make_cycle(3), make_cycle(4), make_cycle(5), make_path(4),
                              make_graph(4, [(1, 2), (1, 3), (1, 4), (2, 3)])]))
    tiles = enumerate_tiles(g)
    w = [Fraction(draw(st.integers(1, 6)), draw(st.integers(1, 4))) for _ in tiles]
    N = draw(st.integers(1, 3))
    n = tuple(draw(st.integers(0, N)) for _ in range(g.vertex_count))
    return tiles, w, n, N


@settings(max_examples=80, deadline=None)
@given(instances())
def test_partition_function_matches_brute_force(inst):
    tiles, w, n, N = inst
    assert partition_function_exact(tiles, w, n, N, exact=True) == brute_force_Z(tiles, w, n, N)
    fz = partition_function_exact(tiles, [float(x) for x in w], n, N)
    assert fz == pytest.approx(float(brute_force_Z(tiles, w, n, N)), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(instances())
def test_moments_match_enumeration(inst):
    tiles, w, n, N = inst
    law = enumerate_multiwebs(tiles, w, n, N, exact=True)
    if not law.Z:
        with pytest.raises(InfeasibleMultiplicity):
            exact_moments(tiles, w, n, N, exact=True)
        return
    mean, cov = exact_covariance(tiles, w, n, N, exact=True)
    xs = list(law.support)
    mu = [sum(p * x[t] for x, p in law.support.items()) for t in range(len(tiles))]
    assert list(mean) == mu
    for a in range(len(tiles)):
        for b in range(len(tiles)):
            c = sum(p * (x[a] - mu[a]) * (x[b] - mu[b]) for x, p in law.support.items())
            assert cov[a, b] == c
    cols = incidence_matrix(tiles)[1:]
    assert sum(mean) == N
    assert [sum(cols[v, t] * mean[t] for t in range(len(tiles))) for v in range(len(n))] == list(n)
    assert xs


def test_float_mode_handles_large_values():
    # weights 2^20 push Z past the float range; the float path rescales by powers of two
    tiles = enumerate_tiles(make_cycle(3))
    w = [2**20, 3 * 2**19, 2**20, 5 * 2**18]
    exact = partition_function_exact(tiles, w, (40, 40, 40), 80, exact=True)
    assert exact > 2**1600
    approx = log_partition_function(tiles, [float(x) for x in w], (40, 40, 40), 80)
    assert approx == pytest.approx(math.log(exact), rel=1e-13)


def test_state_cap():
    tiles = enumerate_tiles(make_cycle(7))
    with pytest.raises(ResourceLimit):
        partition_function_exact(tiles, None, (20,) * 7, 40, max_states=1000)


def test_sparse_polynomial_drops_zero_terms():
    p = SparsePolynomial({(1, 0): 0, (0, 1): 2})
    assert len(p) == 1 and p.nvars == 2
    assert homogenize(enumerate_tiles(make_cycle(3)), 3)[0].vector == (3, 0, 0, 0)
