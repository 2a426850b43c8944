"""X-functions of cones, local densities at good primes and truncated Euler products."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import sympy

from .fan import Fan
from .polycore import (
    ConeData, NotInConeError, PolyhedralError, dot, dual_cone, minimal_face_containing,
    simplicial_index, triangulate,
)


class PoleError(ArithmeticError):
    def __init__(self, message: str, form=None):
        super().__init__(message)
        self.form = form


# ---------------------------------------------------------------------------
# X-functions

@dataclass(frozen=True)
class SimplicialTerm:
    index: int
    forms: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RationalConeFunction:
    """X(s) = (1/torsion_order) * sum over terms of index / prod <s, form>."""

    terms: tuple[SimplicialTerm, ...]
    torsion_order: int = 1

    def __call__(self, s):
        s = [Fraction(x) if isinstance(x, int) else x for x in s]
        total = Fraction(0)
        for t in self.terms:
            den = 1
            for g in t.forms:
                v = sum(a * b for a, b in zip(s, g))
                if v == 0:
                    raise PoleError(f"s = {tuple(s)} lies on the pole hyperplane of {g}", g)
                den = den * v
            if isinstance(den, Fraction):
                total = total + t.index / den
            else:
                total = total + sympy.Integer(t.index) / den
        return total / self.torsion_order


def x_function(c: ConeData, torsion_order: int = 1, order: Sequence[int] | None = None) -> RationalConeFunction:
    """Triangulated form of the X-function of ``c``: the integral runs over the dual cone."""
    if c.dim != c.ambient_rank:
        raise PolyhedralError("X-function needs a full-dimensional cone")
    if not c.pointed:
        raise PolyhedralError("X-function needs a pointed cone")
    dual = dual_cone(c)
    terms = tuple(SimplicialTerm(simplicial_index(s), s.generators)
                  for s in triangulate(dual, order))
    return RationalConeFunction(terms, torsion_order)


def cone_x_function(c: ConeData, s: Sequence, torsion_order: int = 1,
                    order: Sequence[int] | None = None):
    """Exact value of the X-function of ``c`` at ``s``.

    ``s`` may be rationals or sympy expressions.
    """
    s = [Fraction(x) if isinstance(x, (int, str)) else x for x in s]
    return x_function(c, torsion_order, order)(s)


def x_pole_order(c: ConeData, ell: Sequence, a_dir: Sequence) -> int:
    """Order of the pole at 0 of t -> X(ell + t a_dir).

    Every simplicial term has a positive leading coefficient, so the order
    is the largest number of forms vanishing at ``ell`` in one term.
    """
    if not c.contains(ell):
        raise NotInConeError(f"{tuple(ell)} is not in the cone")
    if not c.in_interior(a_dir) or c.dim != c.ambient_rank:
        raise PolyhedralError("direction must be interior to a full-dimensional cone")
    fn = x_function(c)
    return max(sum(1 for g in t.forms if dot(g, ell) == 0) for t in fn.terms)


def pole_order_by_face(c: ConeData, ell: Sequence) -> int:
    return minimal_face_containing(c, ell).codim


# ---------------------------------------------------------------------------
# local densities

@dataclass(frozen=True)
class LocalDensityQuery:
    """Density at a prime power ``q`` with shifts ``z`` (one per ray).

    ``frobenius`` is a permutation of ray indices generating the local
    decomposition group; ``None`` means split.
    """

    fan: Fan
    q: int
    z: tuple = ()
    frobenius: tuple[int, ...] | None = None

    def __post_init__(self):
        z = tuple(sympy.nsimplify(x, rational=True) if isinstance(x, float) else sympy.sympify(x)
                  for x in self.z) if self.z else (sympy.Integer(0),) * self.fan.n_rays
        if len(z) != self.fan.n_rays:
            raise ValueError(f"need {self.fan.n_rays} shifts, got {len(z)}")
        object.__setattr__(self, "z", z)
        if self.q < 2:
            raise ValueError("q must be a prime power >= 2")
        for orb in self.ray_orbits():
            if len({z[i] for i in orb}) != 1:
                raise ValueError(f"shifts must be constant on the orbit {sorted(orb)}")
            if (2 + z[min(orb)]).is_real and 2 + z[min(orb)] <= 0:
                raise ValueError(f"shift on rays {sorted(orb)} must exceed -2")

    def ray_orbits(self) -> list[frozenset[int]]:
        n = self.fan.n_rays
        perm = self.frobenius or tuple(range(n))
        seen, out = set(), []
        for i in range(n):
            if i in seen:
                continue
            orb, j = [], i
            while j not in orb:
                orb.append(j)
                j = perm[j]
            seen.update(orb)
            out.append(frozenset(orb))
        return out

    def fixed_cones(self) -> list[frozenset[int]]:
        perm = self.frobenius
        if perm is None:
            return list(self.fan.cones)
        return [c for c in self.fan.cones if frozenset(perm[i] for i in c) == c]


def _geometric_factor(q: int, f: int, z):
    """(q^(f (2+z)) - 1)^-1, exact."""
    e = f * (2 + z)
    if e.is_Integer:
        d = Fraction(q) ** int(e) - 1
        if d == 0:
            raise PoleError(f"q^{e} = 1")
        return 1 / d
    d = sympy.Integer(q) ** e - 1
    if d == 0:
        raise PoleError(f"q^{e} = 1")
    return 1 / d


def denef_density(qry: LocalDensityQuery):
    """Sum over fixed cones of the product over ray orbits of (q^(f(2+z)) - 1)^-1.

    Rational ``Fraction`` when every exponent is an integer, else a sympy number.
    """
    orbits = qry.ray_orbits()
    factor = {}
    for orb in orbits:
        factor[orb] = _geometric_factor(qry.q, len(orb), qry.z[min(orb)])
    total = 0
    for c in qry.fixed_cones():
        term = 1
        for orb in orbits:
            if orb <= c:
                term = term * factor[orb]
        total = total + term
    if isinstance(total, int):
        total = Fraction(total)
    return total


def local_l_factor(qry: LocalDensityQuery):
    """prod over ray orbits of (1 - q^(-f(2+z)))."""
    out = 1
    for orb in qry.ray_orbits():
        e = len(orb) * (2 + qry.z[min(orb)])
        if e.is_Integer:
            out = out * (1 - Fraction(1, qry.q ** int(e)))
        else:
            out = out * (1 - sympy.Integer(qry.q) ** (-e))
    return out


@dataclass(frozen=True)
class EulerProduct:
    raw: float
    normalized: float
    primes: int


def euler_product(f: Fan, z: Sequence = (), prime_bound: int = 100,
                  frobenius: tuple[int, ...] | None = None) -> EulerProduct:
    """Truncated product over p <= prime_bound of the local densities.

    Densities are exact per prime; with integer exponents the whole product
    is an exact rational rounded once at the end, otherwise each factor is
    evaluated at 50 digits.
    """
    raw_exact, norm_exact = Fraction(1), Fraction(1)
    mp_raw, mp_norm = mpmath.mpf(1), mpmath.mpf(1)
    n = 0
    with mpmath.workdps(50):
        for p in sympy.primerange(2, prime_bound + 1):
            qry = LocalDensityQuery(f, int(p), tuple(z), frobenius)
            d = denef_density(qry)
            lf = local_l_factor(qry)
            if isinstance(d, Fraction) and isinstance(lf, Fraction):
                raw_exact *= d
                norm_exact *= d * lf
            else:
                dv = mpmath.mpf(sympy.N(d, 50))
                mp_raw *= dv
                mp_norm *= dv * mpmath.mpf(sympy.N(lf, 50))
            n += 1
        raw = mpmath.mpf(raw_exact.numerator) / raw_exact.denominator * mp_raw
        norm = mpmath.mpf(norm_exact.numerator) / norm_exact.denominator * mp_norm
        return EulerProduct(float(raw), float(norm), n)
