import random

import pytest

from conftest import random_curve
from ellmds.catalog import example_289, example_729
from ellmds.curves import make_curve, random_point
from ellmds.errors import NotDegreeThree, WrongCurveShape
from ellmds.fields import extend_field, make_field
from ellmds.places import (
    Divisor,
    degree3_place_from_witness,
    divisor_sum,
    find_degree3_avoid,
    find_degree3_trace,
    line_divisor,
    make_place,
    place_sum,
    rational_place,
    trace_map,
)


def test_place_of_conjugates_is_equal(e7):
    K = extend_field(e7.field, 3)
    P = random_point(e7, K, random.Random(0))
    while P.is_rational_over(e7.field):
        P = random_point(e7, K, random.Random(1))
    pl = make_place(e7, P)
    assert pl.degree == 3
    conj = e7.frobenius(P, e7.field)
    assert make_place(e7, conj) == pl and hash(make_place(e7, conj)) == hash(pl)
    assert set(pl.orbit) == {P, conj, e7.frobenius(conj, e7.field)}
    assert place_sum(e7, pl) == trace_map(e7, P)


def test_rational_place(e7):
    P = e7.points()[0]
    pl = rational_place(e7, P)
    assert pl.degree == 1 and pl.point == P


def test_divisor_arithmetic(e7):
    P, Q = e7.points()[:2]
    O = e7.O
    D = Divisor(e7, [(P, 2), (Q, -1)])
    assert D.degree == 1 and not D.is_effective()
    assert (D + Divisor.point(e7, Q)).is_effective()
    assert D - D == Divisor(e7)
    assert 2 * D == D + D
    assert -D + D == Divisor(e7)
    assert Divisor.infinity(e7, 3).coeff(rational_place(e7, O)) == 3
    assert divisor_sum(D) == e7.add(e7.mul(2, P), e7.neg(Q))


def _on_line(E, line, P):
    F = E.field
    if line[0] == "vertical":
        return P.x == F(line[1]).v
    a, b = F(line[1]).v, F(line[2]).v
    return P.y == F.add(F.mul(a, P.x), b)


@pytest.mark.parametrize("pa", [(7, 1), (2, 3), (3, 2), (11, 1)])
def test_line_divisors_are_principal(pa):
    F = make_field(*pa)
    rng = random.Random(sum(pa))
    seen_deg3 = False
    for _ in range(8):
        E = random_curve(F, rng)
        lines = [("vertical", rng.randrange(F.q)), ("affine", rng.randrange(F.q), rng.randrange(F.q))]
        lines += [("affine", a, b) for a in range(F.q) for b in range(0, F.q, 3)][:20]
        for line in lines:
            D = line_divisor(E, line)
            assert D.degree == 0
            assert divisor_sum(D) == E.O
            expected_pole = 2 if line[0] == "vertical" else 3
            assert D.coeff(rational_place(E, E.O)) == -expected_pole
            rational = {pl.point for pl in D.support if pl.degree == 1 and pl.point.x is not None}
            brute = {P for P in E.points() if P.x is not None and _on_line(E, line, P)}
            assert rational == brute
            seen_deg3 |= any(pl.degree == 3 for pl in D.support)
    assert seen_deg3 or F.q < 9


def test_trace_method_place(e7):
    R = find_degree3_trace(e7, seed=4)
    assert R.degree == 3 and place_sum(e7, R) == e7.O
    assert find_degree3_trace(e7, seed=4) == R


def test_trace_method_char2():
    F = make_field(2, 10, [1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1])
    E = make_curve(F, 1, 0, 0, 0, F.from_coeffs([0, 0, 1, 0, 0, 0, 1, 0, 1, 0]).v)
    R = find_degree3_trace(E, seed=0)
    assert R.degree == 3 and place_sum(E, R) == E.O


def test_avoid_method_289():
    ex = example_289()
    F, E = ex.field, ex.curve
    R, b = find_degree3_avoid(E)
    assert b == F.from_coeffs([1, 1]).v
    assert R == ex.R and R.degree == 3 and place_sum(E, R) == E.O
    # x^3 + 1 = b^2 has no solution in F_q, and no smaller b works
    cubes = {F.add(F.mul(x, F.mul(x, x)), 1) for x in range(F.q)}
    assert F.mul(b, b) not in cubes
    assert all(F.mul(c, c) in cubes for c in range(b))
    assert all(P.y == b for P in R.orbit)


def test_witness_729():
    ex = example_729()
    assert ex.R.degree == 3 and place_sum(ex.curve, ex.R) == ex.curve.O


def test_witness_rejected_when_solvable(e7):
    y = next(P.y for P in e7.points() if P.x is not None)
    with pytest.raises(NotDegreeThree):
        degree3_place_from_witness(e7, y)


def test_avoid_needs_odd_short_form():
    F = make_field(2, 3)
    with pytest.raises(WrongCurveShape):
        find_degree3_avoid(make_curve(F, 1, 0, 0, 0, 1))
