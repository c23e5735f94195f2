"""JSON readers for matrices, graphs, hypergraphs, subspace families and set functions."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import InputError
from .field import DEFAULT_PRIME, ConjMatrix, ExactMatrix
from .geodil import SubspaceFamily
from .matroids import CountFunction, DPartiteHypergraph, Graph, LinearRank
from .setfunc import SetFunction, ShiftedSum, TableFunction


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}", field=str(path)) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}", field=str(path)) from None


def dumps(obj) -> str:
    """Deterministic JSON text for reports."""
    return json.dumps(obj, sort_keys=True, indent=2)


def _require(obj, key, kind, where):
    if not isinstance(obj, dict):
        raise InputError(f"{where} must be a JSON object", field=where)
    if key not in obj:
        raise InputError(f"{where} is missing {key!r}", field=f"{where}.{key}")
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise InputError(f"{where}.{key} must be an integer", field=f"{where}.{key}")
    if kind is not int and not isinstance(val, kind):
        raise InputError(f"{where}.{key} must be a {kind.__name__}", field=f"{where}.{key}")
    return val


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _grid(obj, where):
    rows = _require(obj, "rows", int, where)
    cols = _require(obj, "cols", int, where)
    entries = _require(obj, "entries", list, where)
    if rows < 0 or cols < 0:
        raise InputError(f"{where} has negative shape", field=f"{where}.rows")
    if len(entries) != rows or any(not isinstance(r, list) or len(r) != cols for r in entries):
        raise InputError(f"{where}.entries is not a {rows}x{cols} array", field=f"{where}.entries")
    return rows, cols, entries


def parse_matrix(obj, p: int = DEFAULT_PRIME, where="matrix") -> ExactMatrix:
    rows, cols, entries = _grid(obj, where)
    for r in entries:
        for x in r:
            if not _is_int(x):
                raise InputError(f"{where}.entries must hold integers, found {x!r}", field=f"{where}.entries")
    a = np.array([[x % p for x in r] for r in entries], dtype=np.int64).reshape(rows, cols)
    return ExactMatrix(a, p)


def parse_conj_matrix(obj, p: int = DEFAULT_PRIME, where="space") -> ConjMatrix:
    """Entries are ``{"re": int, "im": int}`` objects or plain integers (``im = 0``)."""
    rows, cols, entries = _grid(obj, where)
    re = np.zeros((rows, cols), dtype=np.int64)
    im = np.zeros((rows, cols), dtype=np.int64)
    for i, r in enumerate(entries):
        for j, x in enumerate(r):
            if _is_int(x):
                re[i, j] = x % p
            elif isinstance(x, dict) and _is_int(x.get("re")) and _is_int(x.get("im")):
                re[i, j] = x["re"] % p
                im[i, j] = x["im"] % p
            else:
                raise InputError(f"{where}.entries[{i}][{j}] is not a pair entry", field=f"{where}.entries")
    return ConjMatrix(re, im, p)


def matrix_to_json(M: ExactMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols, "entries": M.tolist()}


def parse_graph(obj, where="graph") -> Graph:
    n = _require(obj, "vertices", int, where)
    edges = _require(obj, "edges", list, where)
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(_is_int(x) for x in e)):
            raise InputError(f"{where}.edges entries must be [u, v] pairs", field=f"{where}.edges")
    return Graph(n, tuple(tuple(e) for e in edges))


def parse_hypergraph(obj, where="hypergraph") -> DPartiteHypergraph:
    classes = _require(obj, "classes", list, where)
    edges = _require(obj, "edges", list, where)
    if not all(_is_int(c) for c in classes):
        raise InputError(f"{where}.classes must be integers", field=f"{where}.classes")
    for e in edges:
        if not (isinstance(e, list) and all(_is_int(x) for x in e)):
            raise InputError(f"{where}.edges entries must be integer lists", field=f"{where}.edges")
    return DPartiteHypergraph(tuple(classes), tuple(tuple(e) for e in edges))


def parse_family(obj, p: int = DEFAULT_PRIME, where="family") -> SubspaceFamily:
    n = _require(obj, "ambient", int, where)
    members = _require(obj, "members", list, where)
    mats = [parse_matrix(M, p, where=f"{where}.members[{i}]") for i, M in enumerate(members)]
    return SubspaceFamily.from_matrices(n, mats, p)


def parse_set_function(obj, p: int = DEFAULT_PRIME, where="function") -> SetFunction:
    kind = _require(obj, "type", str, where)
    if kind == "count":
        graph = parse_graph(_require(obj, "graph", dict, where), where=f"{where}.graph")
        return CountFunction(graph, _require(obj, "k", int, where), _require(obj, "l", int, where))
    if kind == "linear":
        return LinearRank(parse_matrix(_require(obj, "matrix", dict, where), p, where=f"{where}.matrix"))
    if kind == "table":
        values = _require(obj, "values", dict, where)
        try:
            table = {int(k): v for k, v in values.items()}
        except ValueError:
            raise InputError(f"{where}.values keys must be integer bitmasks", field=f"{where}.values") from None
        if not all(_is_int(v) for v in table.values()):
            raise InputError(f"{where}.values must map to integers", field=f"{where}.values")
        m = obj.get("m", max((k.bit_length() for k in table), default=0))
        if not _is_int(m):
            raise InputError(f"{where}.m must be an integer", field=f"{where}.m")
        table.setdefault(0, 0)
        return TableFunction(m, table)
    if kind == "shifted-sum":
        terms = _require(obj, "terms", list, where)
        shift = obj.get("shift", 0)
        if not _is_int(shift):
            raise InputError(f"{where}.shift must be an integer", field=f"{where}.shift")
        parsed = []
        for i, t in enumerate(terms):
            here = f"{where}.terms[{i}]"
            if isinstance(t, list) and len(t) == 2:
                coef, fn = t
            elif isinstance(t, dict):
                coef, fn = t.get("coef", 1), t.get("function")
            else:
                raise InputError(f"{here} must be [coef, function] or an object", field=here)
            if not _is_int(coef):
                raise InputError(f"{here} coefficient must be an integer", field=here)
            parsed.append((coef, parse_set_function(fn, p, where=here)))
        if not parsed:
            raise InputError(f"{where}.terms is empty", field=f"{where}.terms")
        return ShiftedSum(parsed, shift)
    raise InputError(f"unknown set function type {kind!r}", field=f"{where}.type")


def read(path, parser, **kw):
    return parser(load_json(Path(path)), **kw)
