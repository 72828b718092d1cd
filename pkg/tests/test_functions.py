import random
from collections import Counter

import pytest

from conftest import random_curve
from ellmds.catalog import example_289
from ellmds.curves import Point, make_curve, random_point
from ellmds.errors import PoleAtPoint
from ellmds.fields import extend_field, make_field
from ellmds.functions import (
    FunctionRep,
    _s_add,
    _s_mul,
    _s_const,
    evaluate_int,
    line_through,
    local_expansion,
    miller_reduce,
    monomial,
    rr_basis,
    vertical,
)
from ellmds.places import Divisor, divisor_sum, make_place


def all_points(E, K):
    pts = [Point(K)]
    for x in range(K.q):
        pts.extend(E.point(x, y, K) for y in E.y_roots(K, x))
    return pts


def divisor_everywhere(f, pts) -> Counter:
    out = Counter()
    for P in pts:
        v = f.valuation(P)
        if v:
            out[P] = v
    return out


def expected(*terms):
    out = Counter()
    for P, c in terms:
        out[P] += c
    return nonzero(out)


def nonzero(c: Counter) -> Counter:
    return Counter({k: v for k, v in c.items() if v})


@pytest.mark.parametrize("pa", [(7, 1), (2, 3), (3, 2)])
def test_local_expansion_solves_equation(pa):
    F = make_field(*pa)
    rng = random.Random(1)
    E = random_curve(F, rng)
    n = 6
    for P in E.points():
        if P.x is None:
            continue
        xs, ys = local_expansion(E, F, P, n)
        a1, a2, a3, a4, a6 = E.coeffs
        lhs = _s_add(F, _s_mul(F, ys, ys), _s_mul(F, _s_add(F, [F.mul(a1, v) for v in xs], _s_const(a3, n)), ys))
        x2 = _s_mul(F, xs, xs)
        rhs = _s_add(F, _s_mul(F, x2, _s_add(F, xs, _s_const(a2, n))),
                     _s_add(F, [F.mul(a4, v) for v in xs], _s_const(a6, n)))
        assert lhs == rhs
        assert (xs[0], ys[0]) == (P.x, P.y) and (xs[1], ys[1]) != (0, 0)


@pytest.mark.parametrize("n", [0, 2, 3, 4, 5, 7])
def test_monomial_pole_order(n, e7):
    f = FunctionRep(e7, e7.field, 1, [(monomial(n), 1)])
    assert f.valuation(e7.O) == -n
    with pytest.raises(ValueError):
        monomial(1)


@pytest.mark.parametrize("pa", [(7, 1), (2, 3), (3, 2)])
def test_line_and_vertical_divisors(pa):
    F = make_field(*pa)
    rng = random.Random(2)
    E = random_curve(F, rng)
    pts = all_points(E, F)
    O = E.O
    for _ in range(15):
        A, B = rng.choice(pts), rng.choice(pts)
        L = line_through(E, A, B)
        C = E.neg(E.add(A, B))
        if A.x is None or B.x is None or E.slope(A, B) is None:
            continue
        assert divisor_everywhere(L, pts) == expected((A, 1), (B, 1), (C, 1), (O, -3))
        V = vertical(E, A)
        assert divisor_everywhere(V, pts) == expected((A, 1), (E.neg(A), 1), (O, -2))


def _random_degree0(E, rng, with_place):
    F = E.field
    terms = []
    pts = [P for P in E.points() if P.x is not None]
    for P in rng.sample(pts, min(3, len(pts))):
        terms.append((P, rng.choice([-2, -1, 1, 2])))
    if with_place:
        K = extend_field(F, 3)
        R = random_point(E, K, rng)
        while R.is_rational_over(F):
            R = random_point(E, K, rng)
        terms.append((make_place(E, R), rng.choice([-1, 1])))
    D = Divisor(E, terms)
    return D - Divisor.infinity(E, D.degree)


@pytest.mark.parametrize("seed", range(6))
def test_miller_reduce_divisor(seed):
    rng = random.Random(seed)
    F = make_field(rng.choice([5, 7]))
    E = random_curve(F, rng)
    D0 = _random_degree0(E, rng, with_place=seed % 2 == 1)
    h, T = miller_reduce(E, D0)
    assert T == divisor_sum(D0)
    K = D0.common_field()
    pts = all_points(E, K)
    want = Counter(D0.geometric(K))
    want[T.over(K)] -= 1
    want[Point(K)] += 1
    assert divisor_everywhere(h, pts) == nonzero(want)


def test_miller_function_for_worked_place():
    ex = example_289()
    E, F = ex.curve, ex.field
    h, T = miller_reduce(E, Divisor(E, [(ex.R, 1)]) - Divisor.infinity(E, 3))
    assert T == E.O
    # h is a constant multiple of y - b
    b = ex.R.witness_b
    ratios = {F.div(evaluate_int(h, P), F.sub(P.y, b)) for P in E.points()[:40]
              if P.x is not None and P.y != b}
    assert len(ratios) == 1


def test_cancelling_factors_evaluate(e7):
    P = next(P for P in e7.points() if P.x is not None)
    f = vertical(e7, P) / vertical(e7, P)
    assert evaluate_int(f, P) == 1
    with pytest.raises(PoleAtPoint):
        evaluate_int(vertical(e7, P).inverse(), P)


def test_rr_basis_at_infinity(e7):
    basis = rr_basis(e7, Divisor.infinity(e7, 5))
    assert sorted(-f.valuation(e7.O) for f in basis) == [0, 2, 3, 4, 5]


def test_rr_basis_single_point(e7):
    P = next(P for P in e7.points() if P.x is not None)
    (f,) = rr_basis(e7, Divisor.point(e7, P))
    pts = all_points(e7, e7.field)
    assert not divisor_everywhere(f, pts)  # a nonzero constant


def test_rr_basis_rejects_nonpositive_degree(e7):
    P = e7.points()[0]
    with pytest.raises(ValueError):
        rr_basis(e7, Divisor(e7, [(P, 1), (e7.O, -1)]))


def test_rr_basis_worked_example():
    ex = example_289()
    basis = rr_basis(ex.curve, ex.spec.G)
    assert len(basis) == 4


def test_char2_basis():
    F = make_field(2, 3)
    E = make_curve(F, 1, 0, 0, 0, 1)
    rng = random.Random(3)
    pts = all_points(E, F)
    for _ in range(10):
        P, Q = rng.sample(pts[1:], 2)
        G = Divisor(E, [(P, 2), (Q, 1), (E.O, 1)])
        basis = rr_basis(E, G)
        assert len(basis) == 4
        geo = G.geometric()
        for f in basis:
            for R, v in divisor_everywhere(f, pts).items():
                assert v + geo.get(R, 0) >= 0
