"""JSON/CSV file formats.

Grid points are written as comma-joined integers and pairs as ``"u|v"``.
Rationals are ``"p/q"`` strings (q > 0, lowest terms, ``q`` always present).
Every writer emits keys and rows in a fixed order so output bytes depend only
on content.
"""
from __future__ import annotations

import csv
import io
import json
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any

from . import linalg
from .core import PersistenceModule, direct_sum, module_from_cubes, zero_module
from .decomposition import SignedCubeSet
from .grid import CubeSpec, GridBox, RankInvariant
from .invariants import FeatureVector


class FormatError(ValueError):
    """Structurally malformed input; ``where`` names the offending field."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def parse_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None


def read_json(path: str) -> Any:
    with open(path, encoding="utf-8") as fh:
        return parse_json(fh.read(), path)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def point_key(v) -> str:
    return ",".join(str(c) for c in v)


def pair_key(u, v) -> str:
    return f"{point_key(u)}|{point_key(v)}"


def parse_point_key(text: str) -> tuple[int, ...]:
    return tuple(int(c) for c in text.split(","))


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def decimal_str(q: Fraction, digits: int = 17) -> str:
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(q.numerator) / Decimal(q.denominator))


# -- field readers -----------------------------------------------------------


def _get(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise FormatError(where, "expected an object")
    if key not in obj:
        raise FormatError(f"{where}.{key}", "missing field")
    return obj[key]


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(where, f"expected an integer, got {value!r}")
    return value


def _vector(value, n: int | None, where: str) -> tuple[int, ...]:
    if not isinstance(value, list):
        raise FormatError(where, "expected a list of integers")
    vec = tuple(_int(c, f"{where}[{i}]") for i, c in enumerate(value))
    if n is not None and len(vec) != n:
        raise FormatError(where, f"expected length {n}, got {len(vec)}")
    return vec


def _box(obj, n: int, where: str) -> GridBox:
    lo = _vector(_get(obj, "lo", where), n, f"{where}.lo")
    hi = _vector(_get(obj, "hi", where), n, f"{where}.hi")
    try:
        return GridBox(lo, hi)
    except ValueError as exc:
        raise FormatError(where, str(exc)) from None


def _cube(obj, n: int, where: str) -> CubeSpec:
    x = _vector(_get(obj, "x", where), n, f"{where}.x")
    y = _vector(_get(obj, "y", where), n, f"{where}.y")
    try:
        return CubeSpec(x, y)
    except ValueError as exc:
        raise FormatError(where, str(exc)) from None


# -- modules -----------------------------------------------------------------


def module_from_json(doc) -> PersistenceModule:
    n = _int(_get(doc, "n", "$"), "$.n")
    if n < 1:
        raise FormatError("$.n", "must be positive")
    has_cubes = "cubes" in doc
    has_dims = "dims" in doc or "maps" in doc
    if has_cubes == has_dims:
        raise FormatError("$", "exactly one of 'cubes' or 'dims'+'maps' is required")
    if has_cubes:
        cubes = doc["cubes"]
        if not isinstance(cubes, list):
            raise FormatError("$.cubes", "expected a list")
        items = []
        for i, c in enumerate(cubes):
            where = f"$.cubes[{i}]"
            mult = _int(c.get("mult", 1) if isinstance(c, dict) else None, f"{where}.mult")
            if mult < 1:
                raise FormatError(f"{where}.mult", "must be positive")
            items.append((_cube(c, n, where), mult))
        box = _box(doc["box"], n, "$.box") if "box" in doc else None
        if not items:
            if box is None:
                raise FormatError("$.cubes", "empty module not representable without a box")
            return zero_module(box)
        module = module_from_cubes(n, items)
        return direct_sum(module, zero_module(box)) if box is not None else module
    box = _box(_get(doc, "box", "$"), n, "$.box")
    dims = {}
    for i, entry in enumerate(_get(doc, "dims", "$")):
        where = f"$.dims[{i}]"
        v = _vector(_get(entry, "v", where), n, f"{where}.v")
        d = _int(_get(entry, "dim", where), f"{where}.dim")
        if d < 0:
            raise FormatError(f"{where}.dim", "must be nonnegative")
        dims[v] = d
    maps = {}
    for i, entry in enumerate(doc.get("maps", [])):
        where = f"$.maps[{i}]"
        v = _vector(_get(entry, "v", where), n, f"{where}.v")
        axis = _int(_get(entry, "axis", where), f"{where}.axis")
        if not 0 <= axis < n:
            raise FormatError(f"{where}.axis", f"must lie in [0, {n})")
        shape = _vector(_get(entry, "shape", where), 2, f"{where}.shape")
        data = _vector(_get(entry, "data", where), None, f"{where}.data")
        if len(data) != shape[0] * shape[1]:
            raise FormatError(f"{where}.data", f"expected {shape[0] * shape[1]} entries")
        maps[(v, axis)] = linalg.int_matrix(data, shape)
    return PersistenceModule(box, dims, maps)


def module_to_json(module: PersistenceModule) -> dict:
    dims = [{"v": list(v), "dim": module.dim(v)} for v in module.box.points() if module.dim(v)]
    maps = []
    for v in module.box.points():
        for ax in range(module.n):
            mat = module.maps.get((v, ax))
            if mat is None or mat.size == 0:
                continue
            maps.append(
                {"v": list(v), "axis": ax, "shape": list(mat.shape), "data": [int(c) for c in mat.flat]}
            )
    return {
        "n": module.n,
        "box": {"lo": list(module.box.lo), "hi": list(module.box.hi)},
        "dims": dims,
        "maps": maps,
    }


def cubes_to_module_json(n: int, cubes) -> dict:
    return {
        "n": n,
        "cubes": [{"x": list(c.x), "y": list(c.y), "mult": m} for c, m in cubes],
    }


# -- rank invariants and cube sets --------------------------------------------


def rank_invariant_to_json(rho: RankInvariant) -> dict:
    values = {pair_key(u, v): val for (u, v), val in sorted(rho.values.items())}
    return {
        "n": rho.n,
        "box": {"lo": list(rho.box.lo), "hi": list(rho.box.hi)},
        "values": values,
    }


def rank_invariant_from_json(doc) -> RankInvariant:
    n = _int(_get(doc, "n", "$"), "$.n")
    box = _box(_get(doc, "box", "$"), n, "$.box")
    raw = _get(doc, "values", "$")
    if not isinstance(raw, dict):
        raise FormatError("$.values", "expected an object")
    values = {}
    for key, val in raw.items():
        where = f"$.values[{key!r}]"
        try:
            us, vs = key.split("|")
            u, v = parse_point_key(us), parse_point_key(vs)
        except ValueError:
            raise FormatError(where, "keys must look like 'u|v'") from None
        if len(u) != n or len(v) != n:
            raise FormatError(where, f"points must have length {n}")
        values[(u, v)] = _int(val, where)
    return RankInvariant(box, values)


def cubeset_to_json(X: SignedCubeSet, box: GridBox | None = None) -> dict:
    doc: dict = {"n": X.n}
    if box is not None:
        doc["box"] = {"lo": list(box.lo), "hi": list(box.hi)}
    doc["terms"] = [{"x": list(c.x), "y": list(c.y), "coef": k} for c, k in X]
    return doc


def cubeset_from_json(doc) -> tuple[SignedCubeSet, GridBox | None]:
    n = _int(_get(doc, "n", "$"), "$.n")
    box = _box(doc["box"], n, "$.box") if "box" in doc else None
    terms = []
    for i, t in enumerate(_get(doc, "terms", "$")):
        where = f"$.terms[{i}]"
        terms.append((_cube(t, n, where), _int(_get(t, "coef", where), f"{where}.coef")))
    return SignedCubeSet.from_terms(n, terms), box


# -- features ----------------------------------------------------------------


def feature_rows(fv: FeatureVector) -> list[dict]:
    return [
        {
            "a": list(idx.a),
            "b": list(idx.b),
            "family": fv.family,
            "value": fraction_str(val),
            "approx": decimal_str(val),
        }
        for idx, val in fv.items()
    ]


def features_to_json(vectors: list[FeatureVector]) -> str:
    rows = [row for fv in vectors for row in feature_rows(fv)]
    return dumps({"n": vectors[0].n if vectors else None, "rows": rows})


def features_to_csv(vectors: list[FeatureVector]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["a", "b", "family", "value", "approx"])
    for fv in vectors:
        for row in feature_rows(fv):
            writer.writerow(
                [point_key(row["a"]), point_key(row["b"]), row["family"], row["value"], row["approx"]]
            )
    return buf.getvalue()
