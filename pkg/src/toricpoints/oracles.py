"""Reference computations that share no code path with the main routines.

Each one is deliberately naive: brute-force loops, truncated series and
explicit parametrizations.  They are used by the acceptance suite and the
tests to pin down the exact values the main routines must reproduce.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from collections import Counter
from itertools import product
from typing import Iterable, Sequence

from .fan import Fan


def valuation_series(f: Fan, p: int, z: Sequence[float], truncation: int = 60) -> float:
    """Sum over a: rays -> {0..truncation} with support a cone of prod p^(-a_i (2 + z_i))."""
    n = f.n_rays
    powers = [[p ** (-a * (2.0 + float(z[i]))) for a in range(truncation + 1)] for i in range(n)]
    total = 0.0
    # vectors grouped by their support, which must be a cone of the fan
    for support in f.cones:
        rays = sorted(support)
        for values in product(range(1, truncation + 1), repeat=len(rays)):
            term = 1.0
            for i, a in zip(rays, values):
                term *= powers[i][a]
            total += term
    return total


def valuation_series_brute(f: Fan, p: int, z: Sequence[float], truncation: int) -> float:
    """Same series over the full box {0..truncation}^rays, for small fans."""
    n = f.n_rays
    cones = f.cones
    powers = [[p ** (-a * (2.0 + float(z[i]))) for a in range(truncation + 1)] for i in range(n)]
    total = 0.0
    for a in product(range(truncation + 1), repeat=n):
        if frozenset(i for i in range(n) if a[i]) in cones:
            term = 1.0
            for i in range(n):
                term *= powers[i][a[i]]
            total += term
    return total


def direct_euler_product(factor, primes: Iterable[int]) -> float:
    out = 1.0
    for p in primes:
        out *= float(factor(p))
    return out


def quadric_parametrized_heights(tmax: int) -> Counter:
    """Height histogram of the set {(e u^2, e v^2, u v) : gcd(u, v) = 1, e = +-1} up to tmax."""
    r = math.isqrt(tmax)
    points = set()
    for u in range(-r, r + 1):
        for v in range(-r, r + 1):
            if math.gcd(u, v) != 1:
                continue
            for e in (1, -1):
                points.add((e * u * u, e * v * v, u * v))
    hist: Counter = Counter()
    for x, y, _ in points:
        h = max(abs(x), abs(y))
        if h <= tmax:
            hist[h] += 1
    return hist


def cumulative(hist: Counter, T) -> int:
    keys = sorted(hist)
    i = bisect_right(keys, math.floor(T))
    return sum(hist[k] for k in keys[:i])


def hyperbola_brute(T: int, region=None, torus_only: bool = True) -> int:
    """#{(x, y) : max(|x y|, |x|, |y|, 1) <= T} by a double loop."""
    n = 0
    for x in range(-T, T + 1):
        for y in range(-T, T + 1):
            if torus_only and (x == 0 or y == 0):
                continue
            if max(abs(x * y), abs(x), abs(y), 1) > T:
                continue
            if region is None or region(abs(x), abs(y)):
                n += 1
    return n


def dirichlet_sum(T: int) -> int:
    return sum(T // d for d in range(1, T + 1))
