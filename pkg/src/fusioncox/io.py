"""File formats: ring and realisation JSON, Coxeter graphs (JSON, DOT, builtins)."""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

import numpy as np

from .errors import StructureError
from .fusion_ring import (
    FusionRing,
    build_group_ring,
    build_rep_s3,
    build_tambara_yamagami,
    build_tensor_product,
    build_verlinde,
    build_verlinde_even,
    cyclic_group_table,
    integer_ring,
    symmetric_group_table,
)
from .realisation import INF, CoxeterMatrix, GeometricRealisation, realisation_from_cartan

SCHEMA = 1


# -- JSON helpers -------------------------------------------------------------

def jsonable(obj):
    """Convert numpy scalars/arrays, tuples and infinities for ``json.dumps``."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StructureError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


# -- fusion rings -------------------------------------------------------------

def ring_to_dict(ring: FusionRing) -> dict:
    return {
        "name": ring.name,
        "basis": list(ring.basis_labels),
        "unit": ring.unit,
        "involution": list(ring.involution),
        "mult": [list(t) for t in sorted(ring.triples())],
    }


def ring_from_dict(d) -> FusionRing:
    if not isinstance(d, dict):
        raise StructureError("ring spec must be a JSON object")
    if "builtin" in d:
        return builtin_ring(d)
    missing = [k for k in ("basis", "unit", "involution", "mult") if k not in d]
    if missing:
        raise StructureError(f"ring spec lacks {', '.join(missing)}")
    for entry in d["mult"]:
        if not isinstance(entry, list) or len(entry) != 4:
            raise StructureError(f"mult entry {entry!r} is not [j, k, i, coeff]")
        if any(not isinstance(x, int) or isinstance(x, bool) for x in entry):
            raise StructureError(f"mult entry {entry!r} must hold integers")
        if entry[3] < 0:
            raise StructureError(f"negative structure constant in {entry!r}")
    return FusionRing.from_triples(d.get("name", "R"), d["basis"], d["unit"], d["involution"], d["mult"])


def _int_param(d, key, low=1):
    v = d.get(key)
    if not isinstance(v, int) or v < low:
        raise StructureError(f"builtin {d.get('builtin')!r} needs integer {key!r} >= {low}")
    return v


def builtin_ring(d) -> FusionRing:
    kind = d.get("builtin")
    if kind == "integer":
        return integer_ring()
    if kind == "group_ring":
        group = d.get("group", "cyclic")
        if group == "cyclic":
            n = _int_param(d, "n")
            return build_group_ring(cyclic_group_table(n), name=f"Z[Z/{n}]")
        if group == "symmetric":
            k = d.get("n", 3)
            table, names = symmetric_group_table(k)
            return build_group_ring(table, names, name=f"Z[S{k}]")
        raise StructureError(f"unknown group {group!r}")
    if kind == "verlinde":
        return build_verlinde(_int_param(d, "n", 2))
    if kind == "verlinde_even":
        return build_verlinde_even(_int_param(d, "n", 2))
    if kind == "rep_s3":
        return build_rep_s3()
    if kind == "tambara_yamagami":
        n = _int_param(d, "n")
        return build_tambara_yamagami(cyclic_group_table(n), name=f"TY(Z/{n})")
    if kind == "tensor":
        factors = d.get("factors")
        if not isinstance(factors, list) or not factors:
            raise StructureError("tensor builtin needs a non-empty 'factors' list")
        ring = ring_from_dict(factors[0])
        for f in factors[1:]:
            ring = build_tensor_product(ring, ring_from_dict(f))
        return ring
    raise StructureError(f"unknown builtin ring {kind!r}")


def read_ring(path) -> FusionRing:
    return ring_from_dict(load_json(path))


# -- realisations ---------------------------------------------------------------

def realisation_to_dict(real: GeometricRealisation) -> dict:
    return {
        "name": real.name,
        "ring": ring_to_dict(real.ring),
        "coxeter": real.coxeter.to_rows(),
        "generators": list(real.coxeter.names),
        "cartan": [[list(e.coeffs) for e in row] for row in real.cartan],
    }


def realisation_from_dict(d) -> GeometricRealisation:
    if not isinstance(d, dict):
        raise StructureError("realisation spec must be a JSON object")
    missing = [k for k in ("ring", "coxeter", "cartan") if k not in d]
    if missing:
        raise StructureError(f"realisation spec lacks {', '.join(missing)}")
    ring = ring_from_dict(d["ring"])
    coxeter = CoxeterMatrix.from_rows(d["coxeter"], d.get("generators"))
    cartan = d["cartan"]
    n = coxeter.rank
    if len(cartan) != n or any(len(row) != n for row in cartan):
        raise StructureError(f"cartan must be {n}x{n}")
    for row in cartan:
        for vec in row:
            if len(vec) != ring.rank or any(not isinstance(x, int) for x in vec):
                raise StructureError(f"cartan entries must be integer vectors of length {ring.rank}")
    return realisation_from_cartan(ring, coxeter, cartan, name=d.get("name", "custom"))


def read_realisation(path) -> GeometricRealisation:
    return realisation_from_dict(load_json(path))


# -- Coxeter graphs ---------------------------------------------------------------

def _parse_label(text: str):
    if text in ("inf", "∞", "0"):
        return INF
    try:
        m = int(text)
    except ValueError:
        raise StructureError(f"bad Coxeter label {text!r}") from None
    if m < 2:
        raise StructureError(f"Coxeter label {m} must be >= 2")
    return m


def _path_matrix(labels):
    n = len(labels) + 1
    rows = [[1 if s == t else 2 for t in range(n)] for s in range(n)]
    for i, m in enumerate(labels):
        rows[i][i + 1] = rows[i + 1][i] = m
    return rows


def builtin_graph(spec: str) -> CoxeterMatrix:
    """``i2:m``, ``a:n``, ``b:n``, ``d:n``, ``h:3``, ``h:4``, ``f:4``, ``affine-a:n``."""
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise StructureError(f"builtin graph {spec!r} must look like kind:param")
    kind = kind.lower()
    if kind == "i2":
        return CoxeterMatrix(tuple(map(tuple, _path_matrix([_parse_label(arg)]))))
    try:
        n = int(arg)
    except ValueError:
        raise StructureError(f"builtin {kind!r} needs an integer rank, got {arg!r}") from None
    if n < 1:
        raise StructureError("rank must be positive")
    if kind == "a":
        return CoxeterMatrix(tuple(map(tuple, _path_matrix([3] * (n - 1)))))
    if kind == "b" and n >= 2:
        return CoxeterMatrix(tuple(map(tuple, _path_matrix([4] + [3] * (n - 2)))))
    if kind == "h" and n in (2, 3, 4):
        return CoxeterMatrix(tuple(map(tuple, _path_matrix([5] + [3] * (n - 2)))))
    if kind == "f" and n == 4:
        return CoxeterMatrix(tuple(map(tuple, _path_matrix([3, 4, 3]))))
    if kind == "d" and n >= 4:
        rows = _path_matrix([3] * (n - 2) + [2])
        rows[n - 3][n - 1] = rows[n - 1][n - 3] = 3
        return CoxeterMatrix(tuple(map(tuple, rows)))
    if kind == "affine-a":
        if n == 1:
            return CoxeterMatrix(((1, INF), (INF, 1)))
        rows = [[1 if s == t else 2 for t in range(n + 1)] for s in range(n + 1)]
        for i in range(n + 1):
            j = (i + 1) % (n + 1)
            rows[i][j] = rows[j][i] = 3
        return CoxeterMatrix(tuple(map(tuple, rows)))
    raise StructureError(f"unknown builtin graph {spec!r}")


def coxeter_from_json(d) -> CoxeterMatrix:
    if isinstance(d, list):
        return CoxeterMatrix.from_rows(d)
    if isinstance(d, dict) and "coxeter" in d:
        return CoxeterMatrix.from_rows(d["coxeter"], d.get("names") or d.get("generators"))
    raise StructureError("graph JSON must be a matrix or an object with 'coxeter'")


def coxeter_to_dot(cm: CoxeterMatrix, name: str = "G") -> str:
    """Undirected DOT; label 3 implicit, others (including ∞) explicit."""
    lines = [f"graph {_quote(name)} {{"]
    for v in cm.names:
        lines.append(f"  {_quote(v)};")
    for a in range(cm.rank):
        for b in range(a + 1, cm.rank):
            m = cm.label(a, b)
            if m == 2:
                continue
            attr = "" if m == 3 else f' [label="{"∞" if m == INF else m}"]'
            lines.append(f"  {_quote(cm.names[a])} -- {_quote(cm.names[b])}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _quote(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


_ID = r'"(?:[^"\\]|\\.)*"|[A-Za-z0-9_.]+'
_EDGE = re.compile(rf'^\s*({_ID})\s*--\s*({_ID})\s*(?:\[\s*label\s*=\s*({_ID})\s*\])?\s*;?\s*$')
_NODE = re.compile(rf'^\s*({_ID})\s*(?:\[[^\]]*\])?\s*;?\s*$')


def _unquote(tok: str) -> str:
    if tok.startswith('"'):
        return re.sub(r'\\(.)', r'\1', tok[1:-1])
    return tok


def coxeter_from_dot(text: str) -> CoxeterMatrix:
    """Parse the subset of DOT written by :func:`coxeter_to_dot`."""
    body = text.strip()
    m = re.match(r'^(?:strict\s+)?graph\b[^{]*\{(.*)\}\s*$', body, re.S)
    if not m:
        raise StructureError("DOT input must be an undirected 'graph { ... }'")
    names, edges = [], []

    def see(v):
        if v not in names:
            names.append(v)

    for raw in re.split(r'[;\n]', m.group(1)):
        stmt = raw.strip()
        if not stmt or stmt.startswith("//"):
            continue
        e = _EDGE.match(stmt)
        if e:
            a, b = _unquote(e.group(1)), _unquote(e.group(2))
            label = _parse_label(_unquote(e.group(3))) if e.group(3) else 3
            see(a)
            see(b)
            edges.append((a, b, label))
            continue
        nd = _NODE.match(stmt)
        if nd and "=" not in stmt.split("[")[0]:
            see(_unquote(nd.group(1)))
            continue
        raise StructureError(f"unsupported DOT statement: {stmt!r}")
    idx = {v: i for i, v in enumerate(names)}
    n = len(names)
    rows = [[1 if s == t else 2 for t in range(n)] for s in range(n)]
    for a, b, label in edges:
        i, j = idx[a], idx[b]
        if i == j:
            raise StructureError(f"self-loop at {a!r}")
        rows[i][j] = rows[j][i] = label
    return CoxeterMatrix(tuple(map(tuple, rows)), tuple(names))


def read_graph(path) -> CoxeterMatrix:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise StructureError(f"cannot read {path}: {exc.strerror}") from None
    if p.suffix == ".dot" or text.lstrip().startswith(("graph", "strict")):
        return coxeter_from_dot(text)
    try:
        return coxeter_from_json(json.loads(text))
    except json.JSONDecodeError as exc:
        raise StructureError(f"{path}: invalid JSON ({exc.msg})") from None
