"""Long-Weierstrass elliptic curves: group law, enumeration, counting, search.

    E : y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6

Coefficients and coordinates are element ints (see :mod:`ellmds.fields`), so
a point over any extension in the tower is handled by the same formulas;
the coordinate field travels with the point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import isqrt

import numpy as np

from .errors import (
    FieldTooLarge,
    InadmissibleCount,
    PointNotOnCurve,
    PreconditionFailed,
    SearchExhausted,
    SingularCurve,
)
from .fields import FieldElem, FiniteField

ENUM_LIMIT = 1 << 12


@dataclass(frozen=True, eq=False)
class Point:
    """Affine point (x, y) or the identity O (x is None), over ``field``.

    Equality and hashing ignore the coordinate field: element ints embed by
    the identity along a tower, so a rational point viewed over GF(q^3)
    compares equal to itself over GF(q).
    """

    field: FiniteField
    x: int | None = None
    y: int | None = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __lt__(self, other: Point):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        # O sorts last, matching enumeration order
        return (1, 0, 0) if self.x is None else (0, self.x, self.y)

    def xe(self) -> FieldElem:
        return FieldElem(self.field, self.x)

    def ye(self) -> FieldElem:
        return FieldElem(self.field, self.y)

    def over(self, F: FiniteField) -> Point:
        """The same point with coordinates viewed in F (a super- or subfield)."""
        if F is self.field:
            return self
        if self.x is not None and max(self.x, self.y) >= F.q:
            raise ValueError(f"{self} is not defined over {F}")
        return Point(F, self.x, self.y)

    def is_rational_over(self, F: FiniteField) -> bool:
        return self.x is None or (self.x < F.q and self.y < F.q)

    def __repr__(self):
        if self.x is None:
            return "O"
        return f"({self.xe()!r}, {self.ye()!r})"


@dataclass(frozen=True, eq=False)
class Curve:
    field: FiniteField
    a1: int = 0
    a2: int = 0
    a3: int = 0
    a4: int = 0
    a6: int = 0
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.discriminant() == 0:
            raise SingularCurve(f"singular curve {self.coeffs}")

    @property
    def coeffs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def key(self):
        return (self.field.key, self.coeffs)

    def __eq__(self, other):
        return isinstance(other, Curve) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    @property
    def O(self) -> Point:
        return Point(self.field)

    def b_invariants(self):
        F = self.field
        a1, a2, a3, a4, a6 = self.coeffs
        add, mul, c = F.add, F.mul, F.from_int
        b2 = add(mul(a1, a1), mul(c(4), a2))
        b4 = add(mul(c(2), a4), mul(a1, a3))
        b6 = add(mul(a3, a3), mul(c(4), a6))
        b8 = F.sub(add(add(mul(mul(a1, a1), a6), mul(c(4), mul(a2, a6))), mul(a2, mul(a3, a3))),
                   add(mul(a1, mul(a3, a4)), mul(a4, a4)))
        return b2, b4, b6, b8

    def discriminant(self) -> int:
        F = self.field
        b2, b4, b6, b8 = self.b_invariants()
        mul, c = F.mul, F.from_int
        t1 = F.neg(mul(mul(b2, b2), b8))
        t2 = mul(c(8), mul(b4, mul(b4, b4)))
        t3 = mul(c(27), mul(b6, b6))
        t4 = mul(c(9), mul(b2, mul(b4, b6)))
        return F.add(F.sub(F.sub(t1, t2), t3), t4)

    # -- equation -------------------------------------------------------------

    def lhs_rhs(self, F: FiniteField, x: int, y: int) -> tuple[int, int]:
        a1, a2, a3, a4, a6 = self.coeffs
        add, mul = F.add, F.mul
        lhs = add(mul(y, y), add(mul(a1, mul(x, y)), mul(a3, y)))
        x2 = mul(x, x)
        rhs = add(add(mul(x2, x), mul(a2, x2)), add(mul(a4, x), a6))
        return lhs, rhs

    def is_on_curve(self, P: Point) -> bool:
        if P.x is None:
            return True
        lhs, rhs = self.lhs_rhs(P.field, P.x, P.y)
        return lhs == rhs

    def point(self, x, y, field: FiniteField | None = None) -> Point:
        """Checked constructor from ints or FieldElems."""
        if field is None:
            field = x.field if isinstance(x, FieldElem) else self.field
            if isinstance(y, FieldElem) and y.field.contains(field):
                field = y.field
        P = Point(field, field(x).v, field(y).v)
        if not field.contains(self.field):
            raise PointNotOnCurve(f"{field} does not contain the curve's field")
        if not self.is_on_curve(P):
            raise PointNotOnCurve(f"{P} is not on {self}")
        return P

    def y_roots(self, F: FiniteField, x: int) -> list[int]:
        """All y with (x, y) on the curve over F."""
        a1, a2, a3, a4, a6 = self.coeffs
        add, mul = F.add, F.mul
        B = add(mul(a1, x), a3)
        x2 = mul(x, x)
        C = F.neg(add(add(mul(x2, x), mul(a2, x2)), add(mul(a4, x), a6)))
        return F.solve_quadratic_int(1, B, C)

    # -- group law --------------------------------------------------------------

    def _common(self, P: Point, Q: Point) -> FiniteField:
        if P.field is Q.field or P.field.contains(Q.field):
            return P.field
        if Q.field.contains(P.field):
            return Q.field
        from .errors import MixedContexts
        raise MixedContexts(f"{P.field} vs {Q.field}")

    def neg(self, P: Point) -> Point:
        if P.x is None:
            return P
        F = P.field
        y = F.sub(F.neg(P.y), F.add(F.mul(self.a1, P.x), self.a3))
        return Point(F, P.x, y)

    def add_unchecked(self, P: Point, Q: Point) -> Point:
        if P.x is None:
            return Q
        if Q.x is None:
            return P
        F = self._common(P, Q)
        add, sub, mul = F.add, F.sub, F.mul
        a1, a2, a3, a4, a6 = self.coeffs
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            if add(add(y1, y2), add(mul(a1, x2), a3)) == 0:
                return Point(F)
            den = add(add(mul(F.from_int(2), y1), mul(a1, x1)), a3)
            num = sub(add(add(mul(F.from_int(3), mul(x1, x1)), mul(mul(F.from_int(2), a2), x1)), a4),
                      mul(a1, y1))
        else:
            num = sub(y2, y1)
            den = sub(x2, x1)
        lam = F.div(num, den)
        nu = sub(y1, mul(lam, x1))
        x3 = sub(sub(sub(add(mul(lam, lam), mul(a1, lam)), a2), x1), x2)
        y3 = sub(sub(F.neg(mul(add(lam, a1), x3)), nu), a3)
        return Point(F, x3, y3)

    def slope(self, P: Point, Q: Point) -> int | None:
        """Slope of the chord/tangent through P and Q (None for a vertical line)."""
        F = self._common(P, Q)
        add, sub, mul = F.add, F.sub, F.mul
        a1, a2, a3, a4, _ = self.coeffs
        if P.x == Q.x:
            den = add(add(mul(F.from_int(2), P.y), mul(a1, P.x)), a3)
            if P.y != Q.y or den == 0:
                return None
            num = sub(add(add(mul(F.from_int(3), mul(P.x, P.x)), mul(mul(F.from_int(2), a2), P.x)), a4),
                      mul(a1, P.y))
            return F.div(num, den)
        return F.div(sub(Q.y, P.y), sub(Q.x, P.x))

    def add(self, P: Point, Q: Point) -> Point:
        for R in (P, Q):
            if not self.is_on_curve(R):
                raise PointNotOnCurve(f"{R} is not on the curve")
        return self.add_unchecked(P, Q)

    def mul(self, m: int, P: Point) -> Point:
        if not self.is_on_curve(P):
            raise PointNotOnCurve(f"{P} is not on the curve")
        return self.mul_unchecked(m, P)

    def mul_unchecked(self, m: int, P: Point) -> Point:
        if m < 0:
            m, P = -m, self.neg(P)
        R = Point(P.field)
        while m:
            if m & 1:
                R = self.add_unchecked(R, P)
            m >>= 1
            if m:
                P = self.add_unchecked(P, P)
        return R

    def frobenius(self, P: Point, relative_to: FiniteField | None = None) -> Point:
        if P.x is None:
            return P
        F = P.field
        Q = (relative_to or self.field).q
        return Point(F, F.pow(P.x, Q), F.pow(P.y, Q))

    # -- enumeration and counting -----------------------------------------------

    def points(self) -> list[Point]:
        pts = self._cache.get("points")
        if pts is None:
            pts, _ = enumerate_points(self)
        return pts

    def order(self) -> int:
        n = self._cache.get("N")
        if n is None:
            n = count_points(self)
            self._cache["N"] = n
        return n

    def to_json(self) -> dict:
        F = self.field
        out = {"field": F.to_json()}
        for name, v in zip(("a1", "a2", "a3", "a4", "a6"), self.coeffs):
            out[name] = F.element_to_json(v)
        return out

    @staticmethod
    def from_json(data: dict) -> Curve:
        F = FiniteField.from_json(data["field"])
        return Curve(F, *(F.element_from_json(data[n]).v for n in ("a1", "a2", "a3", "a4", "a6")))

    def __repr__(self):
        F = self.field
        e = lambda v: repr(FieldElem(F, v))
        lhs = "y^2"
        if self.a1:
            lhs += " + " + ("" if self.a1 == 1 else f"({e(self.a1)})*") + "x*y"
        if self.a3:
            lhs += " + " + ("" if self.a3 == 1 else f"({e(self.a3)})*") + "y"
        rhs = "x^3"
        for v, mono in ((self.a2, "x^2"), (self.a4, "x"), (self.a6, "")):
            if v:
                c = e(v)
                rhs += " + " + (c if not mono else (mono if v == 1 else f"({c})*{mono}"))
        return f"{lhs} = {rhs} over {F!r}"


def make_curve(F: FiniteField, a1=0, a2=0, a3=0, a4=0, a6=0) -> Curve:
    return Curve(F, *(F(c).v for c in (a1, a2, a3, a4, a6)))


def point_add(curve: Curve, P: Point, Q: Point) -> Point:
    return curve.add(P, Q)


def scalar_mul(curve: Curve, m: int, P: Point) -> Point:
    return curve.mul(m, P)


def hasse_ok(q: int, N: int) -> bool:
    """|N - q - 1| <= 2 sqrt(q), decided exactly."""
    t = q + 1 - N
    return t * t <= 4 * q


def enumerate_points(curve: Curve) -> tuple[list[Point], int]:
    """All rational points, x then y ascending, with O last."""
    F = curve.field
    if F.q > ENUM_LIMIT:
        raise FieldTooLarge(f"q = {F.q} exceeds the enumeration budget {ENUM_LIMIT}")
    cached = curve._cache.get("points")
    if cached is not None:
        return cached, len(cached)
    pts = []
    for x in range(F.q):
        for y in curve.y_roots(F, x):
            pts.append(Point(F, x, y))
    pts.append(Point(F))
    N = len(pts)
    if not hasse_ok(F.q, N):
        raise AssertionError(f"Hasse bound violated: q={F.q}, N={N}")
    curve._cache["points"] = pts
    curve._cache["N"] = N
    return pts, N


def _popcount_parity(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)) & 1


def count_points(curve: Curve) -> int:
    """Number of rational points via vectorised root counting of the y-quadratic."""
    F = curve.field
    if "N" in curve._cache:
        return curve._cache["N"]
    if F.q > 1 << 16:
        raise FieldTooLarge(f"q = {F.q} too large to count by enumeration")
    a1, a2, a3, a4, a6 = curve.coeffs
    xs = np.arange(F.q, dtype=np.int64)
    x2 = F.vmul(xs, xs)
    rhs = F.vadd(F.vadd(F.vmul(x2, xs), F.vmul(x2, np.int64(a2))),
                 F.vadd(F.vmul(xs, np.int64(a4)), np.int64(a6)))
    B = F.vadd(F.vmul(xs, np.int64(a1)), np.int64(a3))
    if F.p == 2:
        # y^2 + B y = rhs: one root if B = 0, else two iff Tr(rhs / B^2) = 0
        zero = B == 0
        Bs = np.where(zero, 1, B)
        c = F.vmul(rhs, F.vinv(F.vmul(Bs, Bs)))
        tr = _popcount_parity(np.bitwise_and(c, F._trace_mask)) if F.abs_degree > 1 else c & 1
        roots = np.where(zero, 1, np.where(tr == 0, 2, 0))
    else:
        # discriminant B^2 + 4 rhs
        disc = F.vadd(F.vmul(B, B), F.vmul(rhs, np.int64(F.from_int(4))))
        if F._kind == "prime":
            chi = np.array([0 if d == 0 else (1 if pow(int(d), (F.p - 1) // 2, F.p) == 1 else -1)
                            for d in disc])
        else:
            logs = F._np["log"][disc]
            chi = np.where(disc == 0, 0, np.where(logs % 2 == 0, 1, -1))
        roots = 1 + chi
    return int(roots.sum()) + 1


def lift_x(curve: Curve, F: FiniteField, x: int) -> list[Point]:
    return [Point(F, x, y) for y in curve.y_roots(F, x)]


def random_point(curve: Curve, F: FiniteField, rng: random.Random, max_tries: int = 1000) -> Point:
    """A random affine point over F (x uniform, then a random root)."""
    for _ in range(max_tries):
        x = rng.randrange(F.q)
        ys = curve.y_roots(F, x)
        if ys:
            return Point(F, x, ys[rng.randrange(len(ys))])
    raise SearchExhausted("could not sample a point")


# -- search -------------------------------------------------------------------


def _family_candidates(F: FiniteField):
    p, a = F.p, F.abs_degree
    if p == 3 and a % 2 == 0:
        yield (0, 0, 0, 1, 0)
        return
    if p % 3 == 2 and a % 2 == 0:
        for theta in range(1, F.q):
            yield (0, 0, 0, 0, F.pow(theta, 3))
        return
    raise PreconditionFailed(f"no maximal-curve family covers p={p}, a={a}")


def _exhaustive_candidates(F: FiniteField):
    q = F.q
    if F.p == 2:
        # ordinary curves first, then the supersingular normal form
        for a2 in range(q):
            for a6 in range(1, q):
                yield (1, a2, 0, 0, a6)
        for a3 in range(1, q):
            for a4 in range(q):
                for a6 in range(q):
                    yield (0, 0, a3, a4, a6)
    elif F.p == 3:
        for a2 in range(q):
            for a4 in range(q):
                for a6 in range(q):
                    yield (0, a2, 0, a4, a6)
    else:
        for a4 in range(q):
            for a6 in range(q):
                yield (0, 0, 0, a4, a6)


def _random_candidates(F: FiniteField, seed: int, budget: int):
    rng = random.Random(seed)
    for _ in range(budget):
        if F.p == 2:
            if rng.random() < 0.5:
                yield (1, rng.randrange(F.q), 0, 0, rng.randrange(1, F.q))
            else:
                yield (0, 0, rng.randrange(1, F.q), rng.randrange(F.q), rng.randrange(F.q))
        elif F.p == 3:
            yield (0, rng.randrange(F.q), 0, rng.randrange(F.q), rng.randrange(F.q))
        else:
            yield (0, 0, 0, rng.randrange(F.q), rng.randrange(F.q))


def find_curve(F: FiniteField, target_N: int, strategy: str = "exhaustive", seed: int = 0,
               budget: int | None = None) -> Curve:
    """First curve (in the strategy's deterministic order) with exactly target_N points."""
    from .groups import admissible_traces

    t = F.q + 1 - target_N
    if t not in admissible_traces(F.p, F.abs_degree):
        raise InadmissibleCount(f"N = {target_N} is not realised by any curve over GF({F.q})")
    if strategy == "family":
        cands = _family_candidates(F)
    elif strategy == "exhaustive":
        cands = _exhaustive_candidates(F)
    elif strategy == "random":
        cands = _random_candidates(F, seed, budget or 100 * F.q)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    tried = 0
    for coeffs in cands:
        tried += 1
        if budget is not None and tried > budget:
            break
        try:
            E = Curve(F, *coeffs)
        except SingularCurve:
            continue
        if count_points(E) == target_N:
            return E
    raise SearchExhausted(f"no curve with N = {target_N} found by {strategy} search ({tried} candidates)")


def default_search(F: FiniteField, target_N: int) -> tuple[Curve, str]:
    """The family when one applies and gives target_N, otherwise exhaustive search."""
    try:
        return find_curve(F, target_N, "family"), "family"
    except (PreconditionFailed, SearchExhausted):
        return find_curve(F, target_N, "exhaustive"), "exhaustive"


def two_sqrt_floor(q: int) -> int:
    return isqrt(4 * q)
