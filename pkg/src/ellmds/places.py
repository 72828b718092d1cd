"""Places (Frobenius orbits), divisors, line divisors and degree-3 place search."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field as dc_field

import numpy as np

from .curves import Curve, Point
from .errors import (
    NoWitnessFound,
    NotDegreeThree,
    PointNotOnCurve,
    SampleBudgetExhausted,
    SumNotRational,
    WrongCurveShape,
)
from .fields import FiniteField, extend_field, poly_divmod, poly_roots


@dataclass(frozen=True, eq=False)
class Place:
    """A Galois orbit of points; degree-1 places are rational points."""

    curve: Curve
    orbit: tuple[Point, ...]
    witness_b: int | None = dc_field(default=None, compare=False)

    @property
    def degree(self) -> int:
        return len(self.orbit)

    @property
    def representative(self) -> Point:
        return min(self.orbit, key=Point.sort_key)

    @property
    def field(self) -> FiniteField:
        return self.orbit[0].field

    @property
    def is_infinity(self) -> bool:
        return self.orbit[0].x is None

    @property
    def point(self) -> Point:
        """The point of a degree-1 place."""
        if self.degree != 1:
            raise ValueError("not a rational place")
        return self.orbit[0]

    def _key(self):
        return frozenset((P.x, P.y) for P in self.orbit)

    def __eq__(self, other):
        return isinstance(other, Place) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def sort_key(self):
        return (self.degree, self.representative.sort_key())

    def __repr__(self):
        if self.degree == 1:
            return f"[{self.orbit[0]!r}]"
        return f"[deg{self.degree} place at {self.representative!r}]"


def rational_place(curve: Curve, P: Point) -> Place:
    return Place(curve, (P.over(curve.field),))


def make_place(curve: Curve, P: Point) -> Place:
    """The place through P: its orbit under the q-power Frobenius."""
    if not curve.is_on_curve(P):
        raise PointNotOnCurve(f"{P} is not on the curve")
    if P.is_rational_over(curve.field):
        return rational_place(curve, P)
    orbit = [P]
    Q = curve.frobenius(P)
    while Q != P:
        orbit.append(Q)
        Q = curve.frobenius(Q)
    F = P.field
    ambient = F.abs_degree // curve.field.abs_degree
    if ambient % len(orbit):
        raise PointNotOnCurve("orbit size does not divide the degree of the coordinate field")
    orbit.sort(key=Point.sort_key)
    return Place(curve, tuple(orbit))


class Divisor:
    """Finite formal sum of places with integer coefficients."""

    __slots__ = ("curve", "terms")

    def __init__(self, curve: Curve, terms=None):
        self.curve = curve
        t: dict[Place, int] = {}
        for pl, c in (terms.items() if isinstance(terms, dict) else (terms or [])):
            if isinstance(pl, Point):
                pl = rational_place(curve, pl)
            t[pl] = t.get(pl, 0) + int(c)
        self.terms = {pl: c for pl, c in t.items() if c}

    @classmethod
    def point(cls, curve: Curve, P: Point, c: int = 1) -> Divisor:
        return cls(curve, [(P, c)])

    @classmethod
    def infinity(cls, curve: Curve, c: int = 1) -> Divisor:
        return cls(curve, [(curve.O, c)])

    @property
    def degree(self) -> int:
        return sum(c * pl.degree for pl, c in self.terms.items())

    @property
    def support(self) -> list[Place]:
        return sorted(self.terms, key=Place.sort_key)

    def coeff(self, pl) -> int:
        if isinstance(pl, Point):
            pl = rational_place(self.curve, pl)
        return self.terms.get(pl, 0)

    def __add__(self, other: Divisor) -> Divisor:
        t = Counter(self.terms)
        t.update(other.terms)
        return Divisor(self.curve, dict(t))

    def __neg__(self) -> Divisor:
        return Divisor(self.curve, {pl: -c for pl, c in self.terms.items()})

    def __sub__(self, other: Divisor) -> Divisor:
        return self + (-other)

    def __rmul__(self, m: int) -> Divisor:
        return Divisor(self.curve, {pl: m * c for pl, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_effective(self) -> bool:
        return all(c > 0 for c in self.terms.values())

    def has_nonrational_support(self) -> bool:
        return any(pl.degree > 1 for pl in self.terms)

    def geometric(self, F: FiniteField | None = None) -> Counter:
        """Point -> multiplicity over the algebraic closure (orbits expanded)."""
        out: Counter = Counter()
        for pl, c in self.terms.items():
            for P in pl.orbit:
                out[P if F is None else P.over(F)] += c
        return out

    def common_field(self) -> FiniteField:
        F = self.curve.field
        for pl in self.terms:
            if pl.field.contains(F) and pl.field.q > F.q:
                F = pl.field
        return F

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for pl in self.support:
            c = self.terms[pl]
            parts.append(f"{c}{pl!r}" if c != 1 else repr(pl))
        return " + ".join(parts)


def place_sum(curve: Curve, pl: Place) -> Point:
    S = Point(pl.field)
    for P in pl.orbit:
        S = curve.add_unchecked(S, P)
    if not S.is_rational_over(curve.field):
        raise SumNotRational(f"orbit sum of {pl} is not rational")
    return S.over(curve.field)


def divisor_sum(D: Divisor) -> Point:
    """sum(D) = sum of coeff * (orbit sum), a rational point."""
    E = D.curve
    total = E.O
    for pl, c in D.terms.items():
        total = E.add_unchecked(total, E.mul_unchecked(c, place_sum(E, pl)))
    return total


# -- lines -------------------------------------------------------------------------


def _root_multiplicities(F: FiniteField, f: list[int]) -> tuple[list[tuple[int, int]], list[int]]:
    """Rational roots of f with multiplicity, and the root-free cofactor."""
    out = []
    for r in poly_roots(F, f):
        m = 0
        lin = [F.neg(r), 1]
        while True:
            quo, rem = poly_divmod(F, f, lin)
            if rem:
                break
            f = quo
            m += 1
        out.append((r, m))
    return out, f


def _irreducible_place(curve: Curve, cof: list[int], point_of_root) -> Place:
    deg = len(cof) - 1
    K = extend_field(curve.field, deg)
    roots = poly_roots(K, cof)
    if not roots:
        raise AssertionError("irreducible factor has no root in its splitting field")
    return make_place(curve, point_of_root(K, roots[0]))


def line_divisor(curve: Curve, line: tuple) -> Divisor:
    """Principal divisor of a line with base-field coefficients.

    ``("vertical", g)`` is x - g; ``("affine", a, b)`` is y - a*x - b.
    """
    F = curve.field
    a1, a2, a3, a4, a6 = curve.coeffs
    O = curve.O
    if line[0] == "vertical":
        g = F(line[1]).v
        # y^2 + (a1 g + a3) y - (g^3 + a2 g^2 + a4 g + a6)
        B = F.add(F.mul(a1, g), a3)
        g2 = F.mul(g, g)
        C = F.neg(F.add(F.add(F.mul(g2, g), F.mul(a2, g2)), F.add(F.mul(a4, g), a6)))
        roots, cof = _root_multiplicities(F, [C, B, 1])
        D = Divisor(curve, [(O, -2)] + [(Point(F, g, y), m) for y, m in roots])
        if len(cof) > 1:
            pl = _irreducible_place(curve, cof, lambda K, y: Point(K, g, y))
            D = D + Divisor(curve, [(pl, 1)])
        return D
    if line[0] == "affine":
        al, be = F(line[1]).v, F(line[2]).v
        add, sub, mul = F.add, F.sub, F.mul
        # x^3 + a2 x^2 + a4 x + a6 - (al x + be)^2 - a1 x (al x + be) - a3 (al x + be)
        c3 = 1
        c2 = sub(sub(a2, mul(al, al)), mul(a1, al))
        c1 = sub(sub(sub(a4, mul(mul(F.from_int(2), al), be)), mul(a1, be)), mul(a3, al))
        c0 = sub(sub(a6, mul(be, be)), mul(a3, be))
        roots, cof = _root_multiplicities(F, [c0, c1, c2, c3])
        D = Divisor(curve, [(O, -3)] + [(Point(F, x, add(mul(al, x), be)), m) for x, m in roots])
        if len(cof) > 1:
            pl = _irreducible_place(curve, cof,
                                    lambda K, x: Point(K, x, K.add(K.mul(al, x), be)))
            D = D + Divisor(curve, [(pl, 1)])
        return D
    raise ValueError(f"unknown line {line!r}")


# -- degree-3 places ------------------------------------------------------------------


def trace_map(curve: Curve, P: Point) -> Point:
    """P + pi(P) + pi^2(P) for P over GF(q^3)."""
    P1 = curve.frobenius(P)
    P2 = curve.frobenius(P1)
    return curve.add_unchecked(curve.add_unchecked(P, P1), P2)


def find_degree3_trace(curve: Curve, seed: int = 0, budget: int | None = None) -> Place:
    """Sample E(GF(q^3)) until a non-rational point in the kernel of the trace appears."""
    F = curve.field
    K = extend_field(F, 3)
    budget = 100 * F.q if budget is None else budget
    rng = random.Random(seed)
    for _ in range(budget):
        x = rng.randrange(K.q)
        if x < F.q:
            continue  # y then lies in GF(q) as well: the point is rational
        ys = curve.y_roots(K, x)
        if not ys:
            continue
        P = Point(K, x, ys[rng.randrange(len(ys))])
        if trace_map(curve, P).x is None:
            pl = make_place(curve, P)
            if pl.degree != 3:
                raise AssertionError("kernel point outside GF(q) with orbit size != 3")
            return pl
    raise SampleBudgetExhausted(f"no degree-3 place with orbit sum O in {budget} samples")


def _check_avoid_shape(curve: Curve):
    if curve.field.p == 2 or curve.a1 or curve.a3:
        raise WrongCurveShape("the avoidance method needs y^2 = f(x) in odd characteristic")


def rhs_values(curve: Curve) -> np.ndarray:
    """f(x) for every x in F_q, where the curve is y^2 = f(x)."""
    F = curve.field
    xs = np.arange(F.q, dtype=np.int64)
    x2 = F.vmul(xs, xs)
    return F.vadd(F.vadd(F.vmul(x2, xs), F.vmul(x2, np.int64(curve.a2))),
                  F.vadd(F.vmul(xs, np.int64(curve.a4)), np.int64(curve.a6)))


def degree3_place_from_witness(curve: Curve, b) -> Place:
    """The place R with div(y - b) = [R] - 3[O], given b with f(x) = b^2 unsolvable in F_q."""
    _check_avoid_shape(curve)
    F = curve.field
    b = F(b).v
    cubic = [F.sub(curve.a6, F.mul(b, b)), curve.a4, curve.a2, 1]
    if poly_roots(F, cubic):
        raise NotDegreeThree(f"f(x) = b^2 has a rational solution for b = {F(b)!r}")
    K = extend_field(F, 3)
    x0 = poly_roots(K, cubic)[0]
    pl = make_place(curve, Point(K, x0, b))
    if pl.degree != 3:
        raise NotDegreeThree("orbit of the witness point does not have size 3")
    return Place(curve, pl.orbit, witness_b=b)


def find_degree3_avoid(curve: Curve) -> tuple[Place, int]:
    """Scan b in F_q (ascending) for b^2 outside {f(x)}; return (R, b)."""
    _check_avoid_shape(curve)
    F = curve.field
    values = np.zeros(F.q, dtype=bool)
    values[rhs_values(curve)] = True
    for b in range(F.q):
        if not values[F.mul(b, b)]:
            return degree3_place_from_witness(curve, b), b
    raise NoWitnessFound("every square is a value of f over F_q")
