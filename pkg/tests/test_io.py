import json
from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from multiweb.io import (atomic_write, matrix_to_csv, read_matrix_csv, table_to_csv, to_json, write_json,
                         write_matrix_csv)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=finite))
def test_csv_round_trip_is_bit_exact(tmp_path_factory, matrix):
    path = tmp_path_factory.mktemp("csv") / "m.csv"
    write_matrix_csv(path, matrix)
    back, rows, cols = read_matrix_csv(path)
    assert back.tobytes() == matrix.astype(np.float64).tobytes()
    assert rows == [str(i) for i in range(matrix.shape[0])]
    assert cols == [str(i) for i in range(matrix.shape[1])]


def test_csv_layout():
    text = matrix_to_csv([[0.1, -2.0]], ["a,b"], ["x", "y"])
    assert text == 'index,x,y\n"a,b",0.1,-2.0\n'
    assert "\r" not in text
    assert table_to_csv([{"alpha": 0.5, "size": 2}], ["alpha", "size"]) == "alpha,size\n0.5,2\n"


def test_json_serializes_fractions_and_arrays(tmp_path):
    obj = {"a": Fraction(1, 2), "b": np.arange(3), "c": np.float64(0.25), "d": (1, 2)}
    assert json.loads(to_json(obj)) == {"a": "1/2", "b": [0, 1, 2], "c": 0.25, "d": [1, 2]}
    path = write_json(tmp_path / "x.json", obj)
    assert json.loads(path.read_text()) == json.loads(to_json(obj))


def test_atomic_write_replaces_and_leaves_no_temp(tmp_path):
    target = tmp_path / "sub" / "f.txt"
    atomic_write(target, "one")
    atomic_write(target, "two")
    atomic_write(tmp_path / "b.bin", b"\x00\x01")
    assert target.read_text() == "two"
    assert (tmp_path / "b.bin").read_bytes() == b"\x00\x01"
    assert [p.name for p in target.parent.iterdir()] == ["f.txt"]
