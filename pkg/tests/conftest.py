import random

import pytest

from ellmds.curves import Curve, _exhaustive_candidates, make_curve
from ellmds.errors import SingularCurve
from ellmds.fields import make_field

ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""

    def report(num: int, ok: bool, detail: str = ""):
        line = f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        ACCEPTANCE.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def all_curves(F):
    """One curve per coefficient tuple of the characteristic's normal forms."""
    out = []
    for coeffs in _exhaustive_candidates(F):
        try:
            out.append(Curve(F, *coeffs))
        except SingularCurve:
            pass
    return out


def random_curve(F, rng: random.Random) -> Curve:
    while True:
        try:
            return Curve(F, *(rng.randrange(F.q) for _ in range(5)))
        except SingularCurve:
            pass


@pytest.fixture(scope="session")
def gf7():
    return make_field(7, 1)


@pytest.fixture(scope="session")
def gf289():
    return make_field(17, 2, [3, 16, 1])


@pytest.fixture(scope="session")
def e7(gf7):
    """y^2 = x^3 + 3x + 1 over GF(7)."""
    return make_curve(gf7, 0, 0, 0, 3, 1)
