"""CSV and JSON emission with atomic writes.

Floats are written with ``repr``, the shortest string that parses back to
the same double, so a CSV re-read reproduces the matrix bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np


def atomic_write(path, data) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": ""})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def format_float(x) -> str:
    return repr(float(x))


def matrix_to_csv(matrix, row_labels=None, col_labels=None) -> str:
    matrix = np.asarray(matrix, dtype=float)
    rows, cols = matrix.shape
    row_labels = [str(i) for i in range(rows)] if row_labels is None else [str(x) for x in row_labels]
    col_labels = [str(i) for i in range(cols)] if col_labels is None else [str(x) for x in col_labels]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(["index"] + col_labels)
    for label, row in zip(row_labels, matrix):
        writer.writerow([label] + [format_float(x) for x in row])
    return buf.getvalue()


def write_matrix_csv(path, matrix, row_labels=None, col_labels=None) -> Path:
    return atomic_write(path, matrix_to_csv(matrix, row_labels, col_labels))


def read_matrix_csv(path):
    """Returns (matrix, row_labels, col_labels)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        labels, values = [], []
        for row in reader:
            labels.append(row[0])
            values.append([float(x) for x in row[1:]])
    return np.array(values, dtype=float).reshape(len(values), len(header) - 1), labels, header[1:]


def table_to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, float) else v for v in (row[c] for c in columns)])
    return buf.getvalue()


def write_table_csv(path, rows: list[dict], columns: list[str]) -> Path:
    return atomic_write(path, table_to_csv(rows, columns))


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(obj) -> str:
    return json.dumps(obj, default=_default, indent=2, sort_keys=False) + "\n"


def write_json(path, obj) -> Path:
    return atomic_write(path, to_json(obj))
