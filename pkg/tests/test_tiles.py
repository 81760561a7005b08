from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from multiweb.errors import ResourceLimit
from multiweb.fibonacci import cycle_matchings, fibonacci, lucas, path_matchings
from multiweb.graph import make_complete_bipartite, make_cycle, make_graph, make_path
from multiweb.tiles import count_tiles, enumerate_tiles, homogenize, incidence_matrix


def brute_force_matchings(g):
    """Edge subsets covering every vertex at most once, by filtering all 2^E subsets."""
    out = []
    for r in range(len(g.edges) + 1):
        for sub in combinations(g.edges, r):
            verts = [v for e in sub for v in e]
            if len(verts) == len(set(verts)):
                out.append(frozenset(sub))
    return out


def as_edge_sets(g, tiles):
    return [frozenset(g.edges[e] for e in t.edges) for t in tiles]


def test_fibonacci_conventions():
    assert [fibonacci(n) for n in range(-1, 9)] == [1, 0, 1, 1, 2, 3, 5, 8, 13, 21]
    assert [lucas(n) for n in range(1, 10)] == [1, 3, 4, 7, 11, 18, 29, 47, 76]
    assert cycle_matchings(1) == 1 and cycle_matchings(2) == 2
    assert path_matchings(7) == 21


def test_cycle3_tiles_in_canonical_order():
    g = make_cycle(3)
    tiles = enumerate_tiles(g)
    assert as_edge_sets(g, tiles) == [frozenset(), {(1, 2)}, {(1, 3)}, {(2, 3)}]
    assert [t.size for t in tiles] == [0, 1, 1, 1]


@pytest.mark.parametrize("g, expected", [(make_cycle(5), 11), (make_path(3), 3), (make_cycle(9), 76),
                                         (make_path(7), 21), (make_cycle(1), 1),
                                         (make_complete_bipartite(2, 3), 13)])
def test_counts(g, expected):
    assert len(enumerate_tiles(g)) == expected
    assert count_tiles(g) == expected


def test_homogenized_zero_multiplicity():
    t3 = homogenize(enumerate_tiles(make_cycle(3)), 3)
    assert t3[0].vector == (3, 0, 0, 0)
    assert t3[1].vector == (1, 1, 1, 0)
    t5 = homogenize(enumerate_tiles(make_cycle(5)), 5)
    assert all(ht.vector[0] == 1 for ht in t5 if ht.size == 2)
    assert all(sum(ht.vector) == 5 for ht in t5)


def test_incidence_matrix_cycle3():
    D = incidence_matrix(enumerate_tiles(make_cycle(3)))
    assert D.tolist() == [[3, 1, 1, 1], [0, 1, 1, 0], [0, 1, 0, 1], [0, 0, 1, 1]]


def test_cap_raises_resource_limit():
    with pytest.raises(ResourceLimit):
        enumerate_tiles(make_cycle(15), cap=100)
    with pytest.raises(ResourceLimit):
        count_tiles(make_complete_bipartite(4, 4), cap=10)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(0, 7))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=12)) if pairs else []
    return make_graph(n, edges)


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_enumeration_matches_brute_force(g):
    tiles = enumerate_tiles(g)
    got = as_edge_sets(g, tiles)
    assert sorted(got, key=sorted) == sorted(brute_force_matchings(g), key=sorted)
    assert len(set(got)) == len(got)
    assert count_tiles(g) == len(tiles)
    keys = [(t.size, t.vertices) for t in tiles]
    assert keys == sorted(keys)
