"""Regions cut out by monomial inequalities ``prod |x|^alpha <= C prod |x|^beta`` (or ``<``)."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence


class RegionError(ValueError):
    pass


@dataclass(frozen=True)
class MonomialConstraint:
    lhs: tuple[int, ...]
    rhs: tuple[int, ...]
    c: Fraction = Fraction(1)
    strict: bool = False

    def holds(self, absx: Sequence[int]) -> bool:
        left = self.c.denominator
        right = self.c.numerator
        for x, a, b in zip(absx, self.lhs, self.rhs):
            if a:
                left *= x ** a
            if b:
                right *= x ** b
        return left < right if self.strict else left <= right


@dataclass(frozen=True)
class Region:
    region_id: str
    constraints: tuple[MonomialConstraint, ...] = ()

    def holds(self, absx: Sequence[int]) -> bool:
        return all(c.holds(absx) for c in self.constraints)


ALL = Region("all")

_FACTOR = re.compile(r"^\|?([A-Za-z_]\w*)\|?(?:\^(\d+))?$")


def _side(text: str, names: Mapping[str, int]) -> tuple[Fraction, list[int]]:
    coeff = Fraction(1)
    exps = [0] * len(names)
    text = text.strip()
    if not text:
        raise RegionError("empty side of inequality")
    for tok in text.split("*"):
        tok = tok.strip()
        try:
            coeff *= Fraction(tok)
            continue
        except ValueError:
            pass
        m = _FACTOR.match(tok)
        if not m or m.group(1) not in names:
            raise RegionError(f"cannot parse factor {tok!r}")
        exps[names[m.group(1)]] += int(m.group(2) or 1)
    if coeff <= 0:
        raise RegionError("coefficients must be positive")
    return coeff, exps


def parse_constraint(text: str, names: Sequence[str]) -> MonomialConstraint:
    """``"x*y^2 <= 3*z"`` or ``"y < x"``; bars around variables are optional (absolute values are implied)."""
    idx = {n: i for i, n in enumerate(names)}
    strict = "<=" not in text
    parts = text.split("<=") if not strict else text.split("<")
    if len(parts) != 2:
        raise RegionError(f"constraint must contain one '<=' or '<': {text!r}")
    cl, lhs = _side(parts[0], idx)
    cr, rhs = _side(parts[1], idx)
    return MonomialConstraint(tuple(lhs), tuple(rhs), cr / cl, strict)


def parse_region(text: str, names: Sequence[str]) -> Region:
    """``"id:constraint;constraint"``; ``"id:"`` alone is the whole space."""
    if ":" not in text:
        raise RegionError(f"region must look like id:constraints, got {text!r}")
    rid, body = text.split(":", 1)
    cons = tuple(parse_constraint(c, names) for c in body.split(";") if c.strip())
    return Region(rid.strip(), cons)
