from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from toricpoints import gallery
from toricpoints.analytic import (
    LocalDensityQuery, PoleError, cone_x_function, denef_density, euler_product, local_l_factor,
    pole_order_by_face, x_function, x_pole_order,
)
from toricpoints.fan import load_fan
from toricpoints.oracles import direct_euler_product, valuation_series, valuation_series_brute
from toricpoints.polycore import ConeData

ORTHANT2 = ConeData.from_vectors([[1, 0], [0, 1]], 2)
ORTHANT3 = ConeData.from_vectors([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
# cone over a square: not simplicial, so the dual needs triangulating
SQUARE = ConeData.from_vectors([[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]], 3)

pos = st.integers(1, 9)


def test_orthant_values():
    assert cone_x_function(ORTHANT2, [1, 1]) == 1
    assert cone_x_function(ORTHANT3, [1, 2, 3]) == Fraction(1, 6)
    assert cone_x_function(ORTHANT2, [1, 1], torsion_order=2) == Fraction(1, 2)


def test_pole_raises():
    with pytest.raises(PoleError):
        cone_x_function(ORTHANT2, [0, 1])


def test_symbolic_argument():
    t = sympy.Symbol("t", positive=True)
    assert sympy.simplify(cone_x_function(ORTHANT2, [t, 2 * t]) - 1 / (2 * t ** 2)) == 0


@settings(max_examples=30, deadline=None)
@given(st.tuples(pos, pos, pos), st.integers(1, 5))
def test_homogeneity(s, t):
    # interior points of the square's cone have positive pairing with all of its facets
    s = (s[0] - 5, s[1] - 5, 20 + s[2])
    scaled = [t * x for x in s]
    assert cone_x_function(SQUARE, scaled) == cone_x_function(SQUARE, s) / t ** 3


@settings(max_examples=30, deadline=None)
@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(11, 30)))
def test_triangulation_independent(s):
    a = cone_x_function(SQUARE, s, order=[0, 1, 2, 3])
    b = cone_x_function(SQUARE, s, order=[3, 1, 2, 0])
    c = cone_x_function(SQUARE, s, order=[2, 3, 0, 1])
    assert a == b == c and a > 0


def test_square_has_two_simplices():
    assert len(x_function(SQUARE).terms) == 2


def test_pole_orders():
    assert x_pole_order(ORTHANT2, [0, 0], [1, 1]) == 2
    assert x_pole_order(ORTHANT2, [0, 3], [1, 1]) == 1
    assert x_pole_order(ORTHANT2, [2, 3], [1, 1]) == 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1], [0, 0, 1], [1, 1, 2], [0, 0, 0]]),
       st.integers(1, 4))
def test_pole_order_matches_face(ell, k):
    ell = [k * x for x in ell]
    assert x_pole_order(SQUARE, ell, [0, 0, 1]) == pole_order_by_face(SQUARE, ell)


def q_series(q):
    return Fraction(1, q * q - 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 9, 11])
def test_density_closed_forms(q):
    r = q_series(q)
    assert denef_density(LocalDensityQuery(gallery.fan("p1"), q)) == 1 + 2 * r
    assert denef_density(LocalDensityQuery(gallery.fan("a2"), q)) == 1 + 2 * r + r * r
    point = load_fan({"lattice_rank": 1, "rays": [], "max_cones": [[]]})
    assert denef_density(LocalDensityQuery(point, q)) == 1


def test_density_with_shift():
    # z shifts the exponent from 2 to 2 + z
    d = denef_density(LocalDensityQuery(gallery.fan("p1"), 2, (1, 1)))
    assert d == 1 + Fraction(2, 7)


def test_density_frobenius_orbit():
    # swapped rays form orbits of length 2, and only the cones {0,2}, {1,3} are fixed
    f = gallery.fan("p1xp1")
    d = denef_density(LocalDensityQuery(f, 3, frobenius=(2, 3, 0, 1)))
    assert d == 1 + 2 * Fraction(1, 3 ** 4 - 1)


@pytest.mark.parametrize("name", ["p1", "p2", "a2", "bl2p2", "p1xp1"])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_density_matches_series(name, p):
    f = gallery.fan(name)
    z = [0.5 * (i % 2) for i in range(f.n_rays)]
    exact = denef_density(LocalDensityQuery(f, p, tuple(Fraction(x) for x in z)))
    assert float(exact) == pytest.approx(valuation_series(f, p, z), rel=1e-12)


def test_grouped_series_matches_box():
    f = gallery.fan("p2")
    assert valuation_series(f, 2, [0, 0, 0], 12) == pytest.approx(valuation_series_brute(f, 2, [0, 0, 0], 12))


def test_l_factor():
    assert local_l_factor(LocalDensityQuery(gallery.fan("p1"), 2)) == Fraction(9, 16)


def test_euler_matches_direct_product():
    ep = euler_product(gallery.fan("p1"), prime_bound=200)
    direct = direct_euler_product(lambda p: 1 + Fraction(2, p * p - 1), sympy.primerange(2, 201))
    assert ep.raw == pytest.approx(direct, rel=1e-12)
    assert ep.primes == 46


def test_euler_tail_small():
    f = gallery.fan("p2")
    a = euler_product(f, prime_bound=500).normalized
    b = euler_product(f, prime_bound=1000).normalized
    assert abs(a - b) < 1e-6


def test_bad_queries():
    with pytest.raises(ValueError):
        LocalDensityQuery(gallery.fan("p1"), 1)
    with pytest.raises(ValueError):
        LocalDensityQuery(gallery.fan("p1"), 2, (0,))
    with pytest.raises(ValueError):
        LocalDensityQuery(gallery.fan("p1"), 2, (-3, -3))
