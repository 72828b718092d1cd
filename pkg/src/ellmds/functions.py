"""Functions on an elliptic curve in factored form, Miller reduction and L(G) bases.

A factor is an element ``a(x) + b(x)*y`` of the coordinate ring; a
:class:`FunctionRep` is ``c * prod(factor_i ** e_i)`` with integer exponents.
Lines, verticals and the monomials x^i, x^j*y are all factors of this shape.
Nothing is ever expanded into a single bivariate polynomial.

Values and valuations at points where factors vanish or have poles are
computed from local power-series expansions of x and y, so zero/zero
cancellations between factors are resolved exactly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .curves import Curve, Point
from .errors import DegenerateStep, DimensionMismatch, PoleAtPoint
from .fields import FiniteField, poly_eval
from .places import Divisor, divisor_sum


def _bigger(F: FiniteField, K: FiniteField) -> FiniteField:
    if F is K or F.contains(K):
        return F
    if K.contains(F):
        return K
    raise ValueError(f"{F} and {K} are not in one tower")


# -- power series ----------------------------------------------------------------


def _s_add(F, a, b):
    return [F.add(x, y) for x, y in zip(a, b)]


def _s_sub(F, a, b):
    return [F.sub(x, y) for x, y in zip(a, b)]


def _s_mul(F, a, b):
    n = len(a)
    out = [0] * n
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j in range(n - i):
            if b[j]:
                out[i + j] = F.add(out[i + j], F.mul(x, b[j]))
    return out


def _s_const(c, n):
    return [c] + [0] * (n - 1)


def _s_poly(F, coeffs, s, n):
    acc = [0] * n
    for c in reversed(coeffs):
        acc = _s_add(F, _s_mul(F, acc, s), _s_const(c, n))
    return acc


def local_expansion(curve: Curve, F: FiniteField, P: Point, n: int) -> tuple[list[int], list[int]]:
    """x(t), y(t) to precision n for a uniformiser t at the affine point P."""
    a1, a2, a3, a4, a6 = curve.coeffs
    x0, y0 = P.x, P.y
    add, sub, mul = F.add, F.sub, F.mul
    fy = add(add(mul(F.from_int(2), y0), mul(a1, x0)), a3)
    fx = sub(sub(sub(mul(a1, y0), mul(F.from_int(3), mul(x0, x0))), mul(mul(F.from_int(2), a2), x0)), a4)

    def equation(xs, ys):
        lhs = _s_add(F, _s_mul(F, ys, ys), _s_mul(F, _s_add(F, [mul(a1, v) for v in xs], _s_const(a3, n)), ys))
        x2 = _s_mul(F, xs, xs)
        rhs = _s_add(F, _s_mul(F, x2, _s_add(F, xs, _s_const(a2, n))),
                     _s_add(F, [mul(a4, v) for v in xs], _s_const(a6, n)))
        return _s_sub(F, lhs, rhs)

    t = [0, 1] + [0] * (n - 2) if n >= 2 else [0] * n
    if fy != 0:
        xs = _s_add(F, _s_const(x0, n), t)
        ys = _s_const(y0, n)
        inv = F.inv(fy)
        for _ in range(n):
            r = equation(xs, ys)
            ys = _s_sub(F, ys, [mul(v, inv) for v in r])
        return xs, ys
    if fx == 0:
        raise DegenerateStep("singular point on a nonsingular curve")
    ys = _s_add(F, _s_const(y0, n), t)
    xs = _s_const(x0, n)
    inv = F.inv(fx)
    for _ in range(n):
        r = equation(xs, ys)
        xs = _s_sub(F, xs, [mul(v, inv) for v in r])
    return xs, ys


# -- factors and functions -----------------------------------------------------------


@dataclass(frozen=True)
class Factor:
    """a(x) + b(x)*y with coefficient lists over one field (constant first)."""

    a: tuple[int, ...]
    b: tuple[int, ...] = ()
    zeros: tuple[Point, ...] | None = None  # affine zeros when known (with repetition)

    @property
    def pole_order(self) -> int:
        pa = 2 * (len(self.a) - 1) if self.a else -1
        pb = 2 * (len(self.b) - 1) + 3 if self.b else -1
        return max(pa, pb, 0)

    def lead_at_infinity(self, F: FiniteField) -> int:
        n = self.pole_order
        if n % 2 == 0:
            return self.a[-1]
        return F.neg(self.b[-1])

    def value(self, F: FiniteField, x: int, y: int) -> int:
        v = poly_eval(F, self.a, x)
        if self.b:
            v = F.add(v, F.mul(poly_eval(F, self.b, x), y))
        return v

    def local(self, curve: Curve, F: FiniteField, P: Point, cache: dict) -> tuple[int, int]:
        """(valuation, leading coefficient) at P for the cached uniformiser there."""
        if P.x is None:
            return -self.pole_order, self.lead_at_infinity(F)
        v = self.value(F, P.x, P.y)
        if v:
            return 0, v
        n = self.pole_order + 1
        key = (P.x, P.y)
        got = cache.get(key)
        if got is None or len(got[0]) < n:
            got = local_expansion(curve, F, P, max(n, 4))
            cache[key] = got
        xs, ys = got[0][:n], got[1][:n]
        s = _s_poly(F, list(self.a), xs, n)
        if self.b:
            s = _s_add(F, s, _s_mul(F, _s_poly(F, list(self.b), xs, n), ys))
        for i, c in enumerate(s):
            if c:
                return i, c
        raise DegenerateStep("factor vanishes identically on the curve")


def monomial(n: int) -> Factor:
    """The function of pole order n at O: x^(n/2) or x^((n-3)/2)*y."""
    if n < 0 or n == 1:
        raise ValueError(f"no monomial of pole order {n}")
    if n % 2 == 0:
        return Factor(tuple([0] * (n // 2) + [1]))
    return Factor((), tuple([0] * ((n - 3) // 2) + [1]))


class FunctionRep:
    """c * prod(f_i ** e_i) over the field ``field``."""

    __slots__ = ("curve", "field", "const", "factors", "_cache")

    def __init__(self, curve: Curve, field: FiniteField | None = None, const: int = 1, factors=()):
        self.curve = curve
        self.field = field or curve.field
        self.const = const
        self.factors: list[tuple[Factor, int]] = [(f, e) for f, e in factors if e]
        self._cache: dict = {}

    def __mul__(self, other: FunctionRep) -> FunctionRep:
        F = _bigger(self.field, other.field)
        return FunctionRep(self.curve, F, F.mul(self.const, other.const), self.factors + other.factors)

    def inverse(self) -> FunctionRep:
        return FunctionRep(self.curve, self.field, self.field.inv(self.const),
                           [(f, -e) for f, e in self.factors])

    def __truediv__(self, other: FunctionRep) -> FunctionRep:
        return self * other.inverse()

    def scale(self, c: int) -> FunctionRep:
        return FunctionRep(self.curve, self.field, self.field.mul(self.const, c), self.factors)

    @property
    def pole_order_at_infinity(self) -> int:
        return sum(e * f.pole_order for f, e in self.factors)

    def local(self, P: Point) -> tuple[int, int]:
        """(valuation, leading coefficient) of the whole product at P."""
        F = _bigger(self.field, P.field)
        val, lead = 0, self.const
        for f, e in self.factors:
            v, c = f.local(self.curve, F, P, self._cache)
            val += e * v
            lead = F.mul(lead, F.pow(c, e))
        return val, lead

    def valuation(self, P: Point) -> int:
        return self.local(P)[0]

    def __call__(self, P: Point) -> int:
        return evaluate_int(self, P)

    def candidate_points(self) -> set[Point]:
        """Points where a factor with a negative exponent vanishes, plus O."""
        pts = {self.curve.O}
        for f, e in self.factors:
            if e < 0:
                if f.zeros is None:
                    raise DegenerateStep("inverted factor without tracked zeros")
                pts.update(f.zeros)
        return pts

    def __repr__(self):
        return f"FunctionRep({len(self.factors)} factors over {self.field!r})"


def evaluate_int(f: FunctionRep, P: Point) -> int:
    F = _bigger(f.field, P.field)
    if P.x is not None:
        acc = f.const
        ok = True
        for fac, e in f.factors:
            v = fac.value(F, P.x, P.y)
            if v == 0:
                ok = False
                break
            acc = F.mul(acc, F.pow(v, e))
        if ok:
            return acc
    val, lead = f.local(P)
    if val < 0:
        raise PoleAtPoint(f"function has a pole of order {-val} at {P}")
    return lead if val == 0 else 0


def evaluate_fn(f: FunctionRep, P: Point):
    from .fields import FieldElem
    return FieldElem(_bigger(f.field, P.field), evaluate_int(f, P))


# -- lines ------------------------------------------------------------------------------


def vertical(curve: Curve, A: Point) -> FunctionRep:
    """V(A) = x - x_A with div [A] + [-A] - 2[O]; the constant 1 for A = O."""
    if A.x is None:
        return FunctionRep(curve, A.field)
    F = A.field
    fac = Factor((F.neg(A.x), 1), (), zeros=(A, curve.neg(A)))
    return FunctionRep(curve, F, 1, [(fac, 1)])


def line_through(curve: Curve, A: Point, B: Point) -> FunctionRep:
    """L(A, B) with div [A] + [B] + [-(A+B)] - 3[O] (vertical/constant when degenerate)."""
    if A.x is None and B.x is None:
        return FunctionRep(curve, A.field)
    if A.x is None:
        return vertical(curve, B)
    if B.x is None:
        return vertical(curve, A)
    F = curve._common(A, B)
    lam = curve.slope(A, B)
    if lam is None:
        if A.x != B.x:
            raise DegenerateStep("no slope for distinct x-coordinates")
        return vertical(curve, A.over(F))
    nu = F.sub(A.y, F.mul(lam, A.x))
    C = curve.neg(curve.add_unchecked(A, B))
    fac = Factor((F.neg(nu), F.neg(lam)), (1,), zeros=(A.over(F), B.over(F), C))
    return FunctionRep(curve, F, 1, [(fac, 1)])


def miller_reduce(curve: Curve, D0: Divisor) -> tuple[FunctionRep, Point]:
    """h and T = sum(D0) with div(h) = D0 - [T] + [O] (D0 of degree 0)."""
    if D0.degree != 0:
        raise ValueError("miller_reduce needs a degree-0 divisor")
    K = D0.common_field()
    pts = D0.geometric()
    h = FunctionRep(curve, K)
    T = Point(K)
    for P in sorted(pts, key=Point.sort_key):
        n = pts[P]
        if P.x is None:
            continue
        P = P.over(K)
        for _ in range(abs(n)):
            if n > 0:
                S = curve.add_unchecked(T, P)
                h = h * line_through(curve, T, P) / vertical(curve, S)
            else:
                mP = curve.neg(P)
                S = curve.add_unchecked(T, mP)
                h = h * line_through(curve, T, mP) / (vertical(curve, S) * vertical(curve, P))
            T = S
    T_rat = divisor_sum(D0)
    if T != T_rat:
        raise DegenerateStep("accumulated point disagrees with the divisor sum")
    return h, T_rat


def _lower_check(f: FunctionRep, G: Divisor) -> bool:
    """div(f) + G >= 0, checked at every point where it could fail."""
    geo = G.geometric()
    pts = f.candidate_points() | {P for P, c in geo.items()}
    for P in pts:
        if f.valuation(P) + geo.get(P, 0) < 0:
            return False
    return True


def rr_basis(curve: Curve, G: Divisor, check: bool = True) -> list[FunctionRep]:
    """deg G functions spanning L(G), with distinct pole orders at O."""
    k = G.degree
    if k < 1:
        raise ValueError("rr_basis needs deg G >= 1")
    h, T = miller_reduce(curve, G - Divisor.infinity(curve, k))
    F = curve.field
    hinv = h.inverse()
    basis = []
    if T.x is None:
        for n in [0] + list(range(2, k + 1)):
            basis.append(FunctionRep(curve, F, 1, [(monomial(n), 1)]) * hinv)
    else:
        mT = curve.neg(T)
        denom = vertical(curve, T).inverse()
        for n in range(2, k + 2):
            mono = monomial(n)
            c = mono.value(F, mT.x, mT.y)
            a = list(mono.a) or [0]
            a[0] = F.sub(a[0], c)
            fac = Factor(tuple(a), mono.b)
            basis.append(FunctionRep(curve, F, 1, [(fac, 1)]) * denom * hinv)
    if len(basis) != k:
        raise DimensionMismatch(f"{len(basis)} functions for a space of dimension {k}")
    if len({f.pole_order_at_infinity for f in basis}) != k:
        raise DimensionMismatch("basis functions share a pole order at O")
    if check:
        for f in basis:
            if not _lower_check(f, G):
                raise DimensionMismatch("basis function not in L(G)")
    return basis


def in_riemann_roch_space(f: FunctionRep, G: Divisor) -> bool:
    return _lower_check(f, G)


def function_divisor_at(f: FunctionRep, points) -> Counter:
    """Valuations of f at the given points (zero entries dropped)."""
    out: Counter = Counter()
    for P in points:
        v = f.valuation(P)
        if v:
            out[P] = v
    return out
