import json

import pytest
from hypothesis import given, strategies as st

from multiweb.errors import InvalidArgument, InvalidEdge
from multiweb.graph import (graph_from_json, make_complete_bipartite, make_cycle, make_graph, make_path,
                            recognize)


def test_cycle_examples():
    g = make_cycle(3)
    assert (g.vertex_count, len(g.edges)) == (3, 3)
    g = make_cycle(1)
    assert (g.vertex_count, g.edges) == (1, ())
    assert make_cycle(5).edges == ((1, 2), (1, 5), (2, 3), (3, 4), (4, 5))


def test_path_examples():
    assert make_path(1).edges == ()
    assert make_path(4).edges == ((1, 2), (2, 3), (3, 4))
    assert make_path(0).vertex_count == 0


def test_bipartite_and_rejections():
    g = make_complete_bipartite(2, 3)
    assert (g.vertex_count, len(g.edges)) == (5, 6)
    with pytest.raises(InvalidEdge):
        make_graph(3, [(1, 1)])
    with pytest.raises(InvalidEdge):
        make_graph(3, [(1, 2), (2, 1)])
    with pytest.raises(InvalidEdge):
        make_graph(3, [(1, 4)])
    with pytest.raises(InvalidArgument):
        make_cycle(0)


@pytest.mark.parametrize("L", [1, 2, 3, 4, 7, 12])
def test_builders_are_idempotent(L):
    for g in (make_cycle(L), make_path(L)):
        assert make_graph(g.vertex_count, g.edges) == g


def test_recognize():
    assert recognize(make_cycle(7)) == ("cycle", 7)
    assert recognize(make_path(4)) == ("path", 4)
    assert recognize(make_complete_bipartite(2, 3)) is None


@st.composite
def graphs(draw):
    n = draw(st.integers(0, 9))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    flipped = [(j, i) if draw(st.booleans()) else (i, j) for i, j in chosen]
    return make_graph(n, flipped)


@given(graphs())
def test_json_round_trip(g):
    text = g.to_json()
    back = graph_from_json(text)
    assert back == g
    assert back.to_json() == text


def test_json_errors_carry_line_and_column():
    text = '{\n  "vertex_count": 3,\n  "edges": [[1, 2],\n            [2, 2]]\n}'
    with pytest.raises(InvalidEdge, match=r"^4:13: .*self-loop"):
        graph_from_json(text)
    with pytest.raises(InvalidArgument, match=r"^1:"):
        graph_from_json('{"vertex_count": 3, "edges": [[1, 2],]}')
    with pytest.raises(InvalidEdge, match="pair of integers"):
        graph_from_json('{"vertex_count": 3, "edges": [[1, 2, 3]]}')
    with pytest.raises(InvalidArgument, match="vertex_count"):
        graph_from_json(json.dumps({"vertex_count": -1, "edges": []}))
