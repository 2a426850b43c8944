"""Monomial-max heights on complete smooth toric varieties.

For a nef class ``lam`` and a maximal cone ``sigma`` let ``m_sigma`` solve
``<m_sigma, n_rho> = -lam_rho`` on the rays of ``sigma``.  The archimedean
height of a Cox point is ``max_sigma prod_rho |x_rho|^e_rho`` with
``e_rho = lam_rho + <m_sigma, n_rho>``.

For points whose divisibility support at each prime is a cone, the
non-archimedean factors are all 1: the term for a maximal cone containing
the support at p is a p-adic unit, and no term exceeds 1 since every
exponent is nonnegative.  So this max is the full height.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ..fan import Fan, is_complete
from ..polycore import dot, solve


class HeightError(ValueError):
    pass


@dataclass(frozen=True)
class HeightSpec:
    fan: Fan
    lam: tuple[int, ...]
    exponents: tuple[tuple[int, ...], ...]  # one row per maximal cone

    @property
    def monomials(self) -> list[tuple[int, ...]]:
        """Distinct exponent vectors (duplicates across cones removed)."""
        return list(dict.fromkeys(self.exponents))


def height_spec(f: Fan, lam: Sequence[int]) -> HeightSpec:
    lam = tuple(int(x) for x in lam)
    if len(lam) != f.n_rays:
        raise HeightError(f"class vector has {len(lam)} entries, expected {f.n_rays}")
    if not is_complete(f):
        raise HeightError("heights need a complete fan")
    rows = []
    for c in sorted(f.max_cones, key=sorted):
        idx = sorted(c)
        m = solve([f.rays[i] for i in idx], [-lam[i] for i in idx])
        e = [lam[r] + dot(m, f.rays[r]) for r in range(f.n_rays)]
        if any(x.denominator != 1 for x in map(Fraction, e)):
            raise HeightError(f"class {lam} is not Cartier on cone {idx}")
        if any(x < 0 for x in e):
            raise HeightError(f"class {lam} is not nef: negative exponent on cone {idx}")
        rows.append(tuple(int(x) for x in e))
    return HeightSpec(f, lam, tuple(rows))


def height_eval(h: HeightSpec, pt: Sequence[int]) -> int:
    if len(pt) != h.fan.n_rays:
        raise HeightError(f"point has {len(pt)} coordinates, expected {h.fan.n_rays}")
    absx = [abs(int(x)) for x in pt]
    best = 0
    for e in h.monomials:
        v = 1
        for x, k in zip(absx, e):
            if k:
                v *= x ** k
        best = max(best, v)
    if best == 0:
        raise HeightError(f"point {tuple(pt)} lies on the boundary (height 0)")
    return best


def lift(h: HeightSpec, u_rays: Sequence[int], coords: Sequence[int]) -> list[int]:
    """Cox coordinates on the compactification of a point of U: boundary coordinates set to 1."""
    out = [1] * h.fan.n_rays
    for i, x in zip(u_rays, coords):
        out[i] = int(x)
    return out


class MonomialHeightTransformer(TransformerMixin, BaseEstimator):
    """Map rows of U-coordinates to heights.

    ``fan`` is the compactification, ``lam`` the class and ``u_rays`` the
    indices of the coordinates supplied in ``X`` (all rays by default).
    """

    def __init__(self, fan: Fan | None = None, lam: Sequence[int] | None = None,
                 u_rays: Sequence[int] | None = None):
        self.fan = fan
        self.lam = lam
        self.u_rays = u_rays

    def fit(self, X=None, y=None):
        if self.fan is None or self.lam is None:
            raise HeightError("fan and lam are required")
        self.spec_ = height_spec(self.fan, self.lam)
        self.u_rays_ = list(range(self.fan.n_rays)) if self.u_rays is None else list(self.u_rays)
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        rows = np.asarray(X, dtype=object)
        if rows.ndim != 2 or rows.shape[1] != len(self.u_rays_):
            raise HeightError(f"expected rows of {len(self.u_rays_)} coordinates")
        return np.array([height_eval(self.spec_, lift(self.spec_, self.u_rays_, r)) for r in rows],
                        dtype=object)
