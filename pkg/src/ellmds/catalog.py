"""The three worked MDS elliptic codes, rebuilt from their published data."""

from __future__ import annotations

from dataclasses import dataclass

from .codes import CodeSpec
from .curves import Curve, Point, make_curve
from .fields import FiniteField, make_field
from .groups import GroupTable, Subgroup, group_table, subgroup_generated
from .places import Divisor, Place, degree3_place_from_witness


@dataclass
class WorkedExample:
    name: str
    field: FiniteField
    curve: Curve
    group: GroupTable
    H: Subgroup
    spec: CodeSpec
    params: tuple[int, int, int]
    P0: Point
    P1: Point | None = None
    R: Place | None = None


def _pt(E: Curve, x, y) -> Point:
    F = E.field
    return E.point(F.from_coeffs(x), F.from_coeffs(y))


def example_289() -> WorkedExample:
    """[162, 4, 159] over GF(17^2): y^2 = x^3 + 1, D = <2P0, P1>, G = [R] + [P0]."""
    F = make_field(17, 2, [3, 16, 1])
    E = make_curve(F, 0, 0, 0, 0, 1)
    P0 = _pt(E, [5, 1], [7, 9])
    P1 = _pt(E, [2, 3], [7, 10])
    G = group_table(E)
    H = subgroup_generated(G, [E.mul(2, P0), P1])
    R = degree3_place_from_witness(E, F.from_coeffs([1, 1]))
    spec = CodeSpec(E, H.elements, Divisor(E, [(R, 1), (P0, 1)]),
                    {"construction": "worked-example-289", "witness_b": R.witness_b})
    return WorkedExample("289", F, E, G, H, spec, (162, 4, 159), P0, P1, R)


def example_729() -> WorkedExample:
    """[392, 4, 389] over GF(3^6): y^2 = x^3 + x, D = <2P0, P1>, G = [R] + [P0]."""
    F = make_field(3, 6, [2, 2, 1, 0, 2, 0, 1])
    E = make_curve(F, 0, 0, 0, 1, 0)
    P0 = _pt(E, [0, 2, 0, 2, 0, 2], [2, 2, 2, 1, 0, 2])
    P1 = _pt(E, [1, 2, 1, 1, 0, 2], [1, 0, 0, 0, 2, 1])
    G = group_table(E)
    H = subgroup_generated(G, [E.mul(2, P0), P1])
    R = degree3_place_from_witness(E, F.gen)
    spec = CodeSpec(E, H.elements, Divisor(E, [(R, 1), (P0, 1)]),
                    {"construction": "worked-example-729", "witness_b": R.witness_b})
    return WorkedExample("729", F, E, G, H, spec, (392, 4, 389), P0, P1, R)


def example_1024() -> WorkedExample:
    """[544, 3, 542] over GF(2^10): y^2 + xy = x^3 + c, D = P0 + <2P0>, G = 3[O]."""
    F = make_field(2, 10, [1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1])
    c = F.from_coeffs([0, 0, 1, 0, 0, 0, 1, 0, 1, 0])
    E = make_curve(F, 1, 0, 0, 0, c)
    P0 = _pt(E, [0, 0, 1, 0, 1, 0, 1, 1, 0, 0], [0, 0, 0, 1, 1, 0, 0, 0, 0, 0])
    G = group_table(E)
    H = subgroup_generated(G, [E.mul(2, P0)])
    spec = CodeSpec(E, H.coset(P0), Divisor.infinity(E, 3), {"construction": "worked-example-1024"})
    return WorkedExample("1024", F, E, G, H, spec, (544, 3, 542), P0)


EXAMPLES = {"289": example_289, "729": example_729, "1024": example_1024}
