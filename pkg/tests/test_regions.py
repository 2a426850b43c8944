from fractions import Fraction

import pytest

from toricpoints.counter.regions import ALL, RegionError, parse_constraint, parse_region

NAMES = ["x", "y", "z"]


def test_parse_and_hold():
    c = parse_constraint("x*y^2 <= 3*z", NAMES)
    assert (c.lhs, c.rhs, c.c, c.strict) == ((1, 2, 0), (0, 0, 1), Fraction(3), False)
    assert c.holds([1, 1, 1]) and not c.holds([2, 1, 0])


def test_bars_and_coefficients():
    c = parse_constraint("2*|x| <= |y|", NAMES)
    assert c.c == Fraction(1, 2)
    assert c.holds([1, 2, 0]) and not c.holds([2, 3, 0])


def test_strict():
    c = parse_constraint("y < x", NAMES)
    assert c.strict
    assert not c.holds([3, 3, 0]) and c.holds([3, 2, 0])


def test_region():
    r = parse_region("band: x <= y; y <= 2*x", NAMES)
    assert r.region_id == "band" and len(r.constraints) == 2
    assert r.holds([2, 3, 0]) and not r.holds([1, 3, 0])
    assert parse_region("all:", NAMES).constraints == () and ALL.holds([0, 0, 0])


@pytest.mark.parametrize("text", ["x = y", "x <= w", "x <= y <= z", "-1*x <= y", " <= y"])
def test_errors(text):
    with pytest.raises(RegionError):
        parse_constraint(text, NAMES)


def test_region_needs_id():
    with pytest.raises(RegionError):
        parse_region("x <= y", NAMES)
