"""Exact serialization of rationals, tables, and matrices.

Rationals cross every file boundary as exact strings "p/q" (or "p" for
integers) -- never as decimals.  Floats are opt-in for plotting
convenience and clearly labeled by the caller.
"""

from __future__ import annotations

import csv
import io
import json

from ._backend import R


def rational_str(q) -> str:
    q = R(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str):
    """Parse 'p/q' or an integer string; decimals are rejected."""
    s = s.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"decimal notation not accepted: {s!r}")
    if "/" in s:
        num, den = s.split("/", 1)
        return R(int(num), int(den))
    return R(int(s))


def value_str(q, as_float: bool = False) -> str:
    return repr(float(R(q))) if as_float else rational_str(q)


def weight_table_rows(w, as_float: bool = False):
    header = [f"x{i+1}" for i in range(w.lattice.n)] + ["weight"]
    rows = [
        list(map(str, x)) + [value_str(v, as_float)]
        for x, v in zip(w.lattice.points, w.values)
    ]
    return header, rows


def weight_table_json(w, as_float: bool = False) -> dict:
    out = {
        "family": w.params.family,
        "n": w.lattice.n,
        "bound": w.lattice.bound,
        "truncated": w.lattice.truncated,
        "normalized": w.normalized,
        "points": [list(x) for x in w.lattice.points],
        "weights": [value_str(v, as_float) for v in w.values],
    }
    if w.tail_bound is not None:
        out["tail_bound"] = value_str(w.tail_bound, as_float)
    return out


def matrix_triplets(M, as_float: bool = False):
    """Sparse triplet rows (row, col, value) of an OperatorMatrix."""
    rows = []
    for i, row in enumerate(M.entries):
        for j, v in enumerate(row):
            if v != 0:
                rows.append([str(i), str(j), value_str(v, as_float)])
    return ["row", "col", "value"], rows


def matrix_json(M, as_float: bool = False) -> dict:
    header, triplets = matrix_triplets(M, as_float)
    return {
        "operator": M.op.label,
        "family": M.op.params.family,
        "size": M.size,
        "valid_rows": list(M.valid_rows),
        "triplets": [[int(r), int(c), v] for r, c, v in triplets],
    }


def gram_rows(degrees, G, as_float: bool = False):
    header = ["m_row", "m_col", "value"]
    rows = []
    for i, mi in enumerate(degrees):
        for j, mj in enumerate(degrees):
            rows.append(
                [",".join(map(str, mi)), ",".join(map(str, mj)),
                 value_str(G[i][j], as_float)]
            )
    return header, rows


def gram_json(degrees, G, as_float: bool = False) -> dict:
    return {
        "degrees": [list(m) for m in degrees],
        "gram": [[value_str(v, as_float) for v in row] for row in G],
    }


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def parse_weight_csv(text: str):
    """Round-trip reader for the weight-table CSV: (points, values)."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    ncoords = len(header) - 1
    points, values = [], []
    for row in reader:
        points.append(tuple(int(c) for c in row[:ncoords]))
        values.append(parse_rational(row[ncoords]))
    return points, values


def parse_triplet_csv(text: str, size: int):
    """Round-trip reader for sparse triplet CSV into a dense matrix."""
    reader = csv.reader(io.StringIO(text))
    next(reader)
    M = [[R(0)] * size for _ in range(size)]
    for r, c, v in reader:
        M[int(r)][int(c)] = parse_rational(v)
    return M
