"""JSON and CSV round-tripping for fields, curves, places, code specs and matrices.

Elements are written as coefficient lists over the prime field (constant term
first); elements of a cubic extension GF(q^3) over GF(p^a) become lists of
three such lists.  Matrix CSV cells join the base-p coefficients with ':'.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Any

import numpy as np

from .codes import CodeSpec, GenMatrix, Verdict
from .curves import Curve, Point
from .fields import FiniteField, extend_field
from .places import Divisor, Place, make_place, rational_place


def point_to_json(P: Point):
    if P.x is None:
        return "O"
    F = P.field
    return {"x": F.element_to_json(P.x), "y": F.element_to_json(P.y)}


def point_from_json(curve: Curve, data, F: FiniteField | None = None) -> Point:
    F = F or curve.field
    if data == "O":
        return Point(F)
    return curve.point(F.element_from_json(data["x"]), F.element_from_json(data["y"]), F)


def place_to_json(pl: Place) -> dict:
    out: dict[str, Any] = {"degree": pl.degree, "representative": point_to_json(pl.representative)}
    if pl.degree > 1:
        out["field"] = pl.field.to_json()
    if pl.witness_b is not None:
        out["witness_b"] = pl.curve.field.element_to_json(pl.witness_b)
    return out


def place_from_json(curve: Curve, data: dict) -> Place:
    d = int(data["degree"])
    if d == 1:
        return rational_place(curve, point_from_json(curve, data["representative"]))
    K = extend_field(curve.field, d)
    if "field" in data and FiniteField.from_json(data["field"]) is not K:
        raise ValueError("place coordinates use an unexpected extension modulus")
    pl = make_place(curve, point_from_json(curve, data["representative"], K))
    if pl.degree != d:
        raise ValueError(f"representative generates a place of degree {pl.degree}, not {d}")
    wb = data.get("witness_b")
    if wb is not None:
        pl = Place(curve, pl.orbit, witness_b=curve.field.element_from_json(wb).v)
    return pl


def divisor_to_json(D: Divisor) -> list[dict]:
    return [{"place": place_to_json(pl), "coeff": D.terms[pl]} for pl in D.support]


def divisor_from_json(curve: Curve, data: list[dict]) -> Divisor:
    return Divisor(curve, [(place_from_json(curve, t["place"]), int(t["coeff"])) for t in data])


def _plain(v, F: FiniteField):
    """Provenance values as JSON: points become point objects."""
    if isinstance(v, Point):
        return point_to_json(v)
    if isinstance(v, dict):
        return {k: _plain(x, F) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x, F) for x in v]
    if isinstance(v, np.integer):
        return int(v)
    return v


def spec_to_json(spec: CodeSpec) -> dict:
    F = spec.field
    prov = _plain(dict(spec.provenance), F)
    if "witness_b" in spec.provenance:
        prov["witness_b"] = F.element_to_json(spec.provenance["witness_b"])
    return {
        "field": F.to_json(),
        "curve": spec.curve.to_json(),
        "n": spec.n,
        "k": spec.k,
        "D": [point_to_json(P) for P in spec.D],
        "G": divisor_to_json(spec.G),
        "provenance": prov,
    }


def spec_from_json(data: dict) -> CodeSpec:
    curve = Curve.from_json(data["curve"])
    D = [point_from_json(curve, p) for p in data["D"]]
    G = divisor_from_json(curve, data["G"])
    prov = dict(data.get("provenance", {}))
    if isinstance(prov.get("u"), (dict, str)):
        prov["u"] = point_from_json(curve, prov["u"])
    if "witness_b" in prov:
        prov["witness_b"] = curve.field.element_from_json(prov["witness_b"]).v
    spec = CodeSpec(curve, D, G, prov)
    if spec.n != data.get("n", spec.n) or spec.k != data.get("k", spec.k):
        raise ValueError("n or k in the document disagrees with D and G")
    return spec


def dumps(obj: Any) -> str:
    """Canonical JSON text (sorted keys, fixed indentation, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- matrices ----------------------------------------------------------------------------


def element_cell(F: FiniteField, v: int) -> str:
    if F.base is None:
        return str(v)
    digits = []
    for _ in range(F.abs_degree):
        v, r = divmod(v, F.p)
        digits.append(str(r))
    return ":".join(digits)


def parse_cell(F: FiniteField, text: str) -> int:
    v = 0
    for d in reversed(text.strip().split(":")):
        v = v * F.p + int(d)
    if v >= F.q:
        raise ValueError(f"{text!r} is not an element of {F}")
    return v


def matrix_to_csv(M: GenMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in M.rows:
        w.writerow([element_cell(M.field, int(v)) for v in row])
    return buf.getvalue()


def matrix_from_csv(F: FiniteField, text: str) -> GenMatrix:
    rows = [[parse_cell(F, c) for c in r] for r in csv.reader(io.StringIO(text)) if r]
    return GenMatrix(F, np.array(rows, dtype=np.int64))


def matrix_header(M: GenMatrix) -> dict:
    prov = {k: v for k, v in M.provenance.items() if k not in ("n", "k")}
    return {"n": M.n, "k": M.k, "field": M.field.to_json(),
            "provenance": _plain(prov, M.field) | ({"witness_b": M.field.element_to_json(prov["witness_b"])}
                                                   if "witness_b" in prov else {})}


def verdict_to_json(v: Verdict, spec: CodeSpec | None = None) -> dict:
    out = v.to_json()
    if "sum_G" in out:
        out["sum_G"] = point_to_json(out["sum_G"])
    if spec is not None and v.witness is not None and v.method in ("combinatorial",):
        out["witness_points"] = [point_to_json(spec.D[i]) for i in v.witness]
    return out
