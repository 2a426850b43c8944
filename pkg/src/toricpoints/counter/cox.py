"""Counting integral points of U through Cox coordinates.

A Cox point of U is an integer vector indexed by the rays of U whose
divisibility support at every prime is a cone; equivalently every
primitive collection has coprime coordinates.  With Pic U free, the
integral points of U are the orbits of {+-1}^rk(Pic U) on Cox points.

The outer coordinates are looped over (absolute values, bounded through a
linear program in log coordinates); the innermost one is counted in closed
form as an interval intersected with a coprimality condition.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import sympy
from scipy.optimize import linprog

from ..fan import Fan, subfan
from ..picard import picard_group
from ..polycore import smith_normal_form
from .heights import HeightSpec
from .records import CountRecord
from .regions import ALL, Region


class CountError(ValueError):
    pass


@lru_cache(maxsize=1 << 16)
def _primes_of(n: int) -> tuple[int, ...]:
    return tuple(sympy.primefactors(n)) if n > 1 else ()


def iroot_floor(n: int, k: int) -> int:
    """Largest x >= 0 with x^k <= n (0 if n < 0)."""
    if n < 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    return int(sympy.integer_nthroot(n, k)[0])


def iroot_ceil(n: int, k: int) -> int:
    """Smallest x >= 0 with x^k >= n."""
    if n <= 0:
        return 0
    r = iroot_floor(n, k)
    return r if r ** k >= n else r + 1


def coprime_count(lo: int, hi: int, primes: Sequence[int]) -> int:
    """#{lo <= x <= hi : x divisible by none of ``primes``}."""
    if hi < lo:
        return 0
    total = 0
    stack = [(1, 1, 0)]
    while stack:
        d, mu, start = stack.pop()
        total += mu * (hi // d - (lo - 1) // d)
        for i in range(start, len(primes)):
            nd = d * primes[i]
            if nd > hi:
                continue
            stack.append((nd, -mu, i + 1))
    return total


@dataclass(frozen=True)
class _Pattern:
    """Counting problem for one zero pattern: all data in active-variable order."""

    m: int                                      # number of nonzero coordinates
    weight: Fraction                            # 2^m / orbit size
    monomials: tuple[tuple[int, ...], ...]      # height exponents on active vars
    constraints: tuple[tuple[tuple[int, ...], tuple[int, ...], Fraction, bool], ...]
    forced_one: frozenset[int]
    gcd_sets: tuple[frozenset[int], ...]


def _orbit_size(classes: list[tuple[int, ...]], rk: int) -> int:
    """2^rk / #{characters of Pic U into +-1 trivial on the given classes}."""
    if rk == 0:
        return 1
    if not classes:
        return 1
    diag = smith_normal_form([list(c) for c in classes], ncols=rk).diagonal
    r = sum(1 for d in diag if d)
    kernel = (rk - r) + sum(1 for d in diag if d and d % 2 == 0)
    return 2 ** (rk - kernel)


@dataclass(frozen=True)
class CoxProblem:
    model_id: str
    region_id: str
    patterns: tuple[_Pattern, ...]


def cox_problem(h: HeightSpec, boundary_rays: Iterable[int], region: Region = ALL,
                include_boundary: bool = False, model_id: str = "cox") -> CoxProblem:
    f: Fan = h.fan
    b = frozenset(boundary_rays)
    u_rays = [i for i in range(f.n_rays) if i not in b]
    if not u_rays:
        raise CountError("U has no rays")
    ufan = subfan(f, u_rays)
    pic = picard_group(ufan)
    if pic.torsion:
        raise CountError(f"Pic U has torsion {list(pic.torsion)}: torsor twists are not "
                         "enumerated here, describe the model with enumerate_affine instead")
    rk = pic.free_rank
    classes = [pic.ray_class(i).free for i in range(len(u_rays))]
    prim = ufan.primitive_collections
    mons_u = [tuple(e[i] for i in u_rays) for e in h.monomials]
    cons_u = []
    for c in region.constraints:
        if len(c.lhs) != f.n_rays:
            raise CountError("region constraints must be indexed by the rays of the compactification")
        cons_u.append((tuple(c.lhs[i] for i in u_rays), tuple(c.rhs[i] for i in u_rays), c.c, c.strict))
    zero_sets = [frozenset()]
    if include_boundary:
        zero_sets = sorted(ufan.cones, key=lambda c: (len(c), sorted(c)))
    patterns = []
    for z in zero_sets:
        active = [i for i in range(len(u_rays)) if i not in z]
        pos = {old: new for new, old in enumerate(active)}
        mons = [tuple(e[i] for i in active) for e in mons_u if not any(e[i] for i in z)]
        if not mons:
            continue
        cons, feasible = [], True
        for lhs, rhs, c, strict in cons_u:
            left_zero = any(lhs[i] for i in z)
            right_zero = any(rhs[i] for i in z)
            if right_zero and (strict or not left_zero):
                feasible = False
                break
            if left_zero:
                continue
            cons.append((tuple(lhs[i] for i in active), tuple(rhs[i] for i in active), c, strict))
        if not feasible:
            continue
        forced, gsets = set(), []
        for p in prim:
            s = frozenset(pos[i] for i in p if i not in z)
            if not s:
                raise CountError("zero pattern contains a primitive collection")
            if len(s) == 1:
                forced |= s
            else:
                gsets.append(s)
        orbit = _orbit_size([classes[i] for i in active], rk)
        weight = Fraction(2 ** len(active), orbit)
        patterns.append(_Pattern(len(active), weight, tuple(dict.fromkeys(mons)), tuple(cons),
                                 frozenset(forced), tuple(gsets)))
    return CoxProblem(model_id, region.region_id, tuple(patterns))


def _log_bound(p: _Pattern, j: int, prefix: Sequence[int], tmax: int) -> int:
    """Upper bound for coordinate j given the first j coordinates (absolute values)."""
    nv = p.m - j
    logs = [math.log(x) for x in prefix]
    a_ub, b_ub = [], []
    for e in p.monomials:
        a_ub.append([float(x) for x in e[j:]])
        b_ub.append(math.log(tmax) - sum(k * l for k, l in zip(e, logs)))
    for lhs, rhs, c, _ in p.constraints:
        d = [a - b for a, b in zip(lhs, rhs)]
        a_ub.append([float(x) for x in d[j:]])
        b_ub.append(math.log(c) - sum(k * l for k, l in zip(d, logs)))
    bounds = [(0, 0) if (j + i) in p.forced_one else (0, None) for i in range(nv)]
    cost = [0.0] * nv
    cost[0] = -1.0
    res = linprog(cost, A_ub=np.array(a_ub), b_ub=np.array(b_ub), bounds=bounds, method="highs")
    if res.status == 2:
        return 0
    if res.status == 3:
        raise CountError(f"coordinate {j} is unbounded under the height")
    if res.status != 0:
        raise CountError(f"bound computation failed: {res.message}")
    return int(math.floor(math.exp(-res.fun) * (1 + 1e-9) + 1e-9))


def _prefix_ok(p: _Pattern, prefix: Sequence[int], tmax: int) -> bool:
    """Exact checks of constraints involving only the assigned coordinates."""
    j = len(prefix)
    for s in p.gcd_sets:
        if max(s) == j - 1:
            g = 0
            for i in s:
                g = math.gcd(g, prefix[i])
            if g != 1:
                return False
    for e in p.monomials:
        if not any(e[j:]):
            v = 1
            for x, k in zip(prefix, e):
                v *= x ** k
            if v > tmax:
                return False
    for lhs, rhs, c, strict in p.constraints:
        if not any(lhs[j:]) and not any(rhs[j:]):
            left, right = c.denominator, c.numerator
            for x, a, b in zip(prefix, lhs, rhs):
                left *= x ** a
                right *= x ** b
            if left > right or (strict and left == right):
                return False
    return True


def _leaf_counts(p: _Pattern, prefix: Sequence[int], schedule: Sequence[int]) -> list[int]:
    j = p.m - 1
    lo, hi = 1, None
    if j in p.forced_one:
        hi = 1
    for lhs, rhs, c, strict in p.constraints:
        A, B = c.denominator, c.numerator
        for x, a, b in zip(prefix, lhs, rhs):
            A *= x ** a
            B *= x ** b
        # integers: A x^d < B  iff  A x^d <= B - 1
        if strict:
            if lhs[j] - rhs[j] >= 0:
                B -= 1
            else:
                A += 1
        d = lhs[j] - rhs[j]
        if d > 0:
            r = iroot_floor(B // A, d) if B >= 0 else 0
            hi = r if hi is None else min(hi, r)
        elif d < 0:
            lo = max(lo, iroot_ceil(-(-A // B), -d))
        elif A > B:
            return [0] * len(schedule)
    mons = []
    for e in p.monomials:
        A = 1
        for x, k in zip(prefix, e):
            A *= x ** k
        mons.append((A, e[j]))
    primes: set[int] = set()
    for s in p.gcd_sets:
        if j in s:
            g = 0
            for i in s:
                if i != j:
                    g = math.gcd(g, prefix[i])
            primes.update(_primes_of(g))
    plist = sorted(primes)
    out = []
    for T in schedule:
        top = hi
        ok = True
        for A, e in mons:
            if e == 0:
                if A > T:
                    ok = False
                    break
                continue
            r = iroot_floor(T // A, e)
            top = r if top is None else min(top, r)
        if not ok or top is None:
            if ok and top is None:
                raise CountError("innermost coordinate is unbounded under the height")
            out.append(0)
            continue
        out.append(coprime_count(lo, top, plist))
    return out


def _count_pattern(p: _Pattern, schedule: Sequence[int], root_range: tuple[int, int] | None = None) -> list[int]:
    """Counts of absolute-value tuples, per T in schedule."""
    tmax = schedule[-1]
    totals = [0] * len(schedule)
    if p.m == 0:
        return [int(_prefix_ok(p, [], T)) for T in schedule]
    if p.m == 1:
        if root_range is None:
            return _leaf_counts(p, [], schedule)
        upper = _leaf_counts(_capped(p, root_range[1]), [], schedule)
        lower = _leaf_counts(_capped(p, root_range[0] - 1), [], schedule)
        return [a - b for a, b in zip(upper, lower)]

    def rec(prefix: list[int], lo: int, hi: int):
        j = len(prefix)
        for x in range(lo, hi + 1):
            prefix.append(x)
            if _prefix_ok(p, prefix, tmax):
                if j + 1 == p.m - 1:
                    for k, c in enumerate(_leaf_counts(p, prefix, schedule)):
                        totals[k] += c
                else:
                    nb = _log_bound(p, j + 1, prefix, tmax)
                    nlo = 1
                    if (j + 1) in p.forced_one:
                        nb = min(nb, 1)
                    rec(prefix, nlo, nb)
            prefix.pop()

    root_hi = _log_bound(p, 0, [], tmax)
    if 0 in p.forced_one:
        root_hi = min(root_hi, 1)
    lo, hi = 1, root_hi
    if root_range is not None:
        lo, hi = max(lo, root_range[0]), min(hi, root_range[1])
    rec([], lo, hi)
    return totals


def _capped(p: _Pattern, cap: int) -> _Pattern:
    """Single-coordinate pattern with the extra constraint x <= cap."""
    extra = ((1,), (0,), Fraction(max(cap, 0)), False)
    return _Pattern(p.m, p.weight, p.monomials, p.constraints + (extra,), p.forced_one, p.gcd_sets)


def root_bound(p: _Pattern, tmax: int) -> int:
    if p.m == 0:
        return 1
    b = _log_bound(p, 0, [], tmax) if p.m > 1 else _single_bound(p, tmax)
    return min(b, 1) if 0 in p.forced_one else b


def _single_bound(p: _Pattern, tmax: int) -> int:
    counts = [e[0] for e in p.monomials if e[0] > 0]
    if not counts:
        raise CountError("coordinate is unbounded under the height")
    return iroot_floor(tmax, min(counts))


def _task(args):
    p, schedule, rng = args
    return _count_pattern(p, schedule, rng)


def split_range(hi: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, hi)) if hi > 0 else 1
    edges = [1 + (hi * k) // parts for k in range(parts + 1)]
    edges[-1] = hi + 1
    return [(edges[k], edges[k + 1] - 1) for k in range(parts)]


def count_cox(problem: CoxProblem, schedule: Sequence[int], workers: int = 1,
              partition: int | None = None) -> list[CountRecord]:
    """Counts N(T) for every T in an increasing schedule.

    ``partition`` splits each pattern's outermost range into that many
    disjoint pieces (default: ``workers``); the result does not depend on it.
    """
    schedule = [int(t) for t in schedule]
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise CountError("schedule must be strictly increasing")
    if not schedule:
        return []
    start = time.perf_counter()
    if schedule[-1] < 1:
        return [CountRecord(problem.model_id, problem.region_id, T, 0, 0.0) for T in schedule]
    parts = partition or workers
    tasks, weights = [], []
    for p in problem.patterns:
        if p.m == 0:
            tasks.append((p, schedule, None))
            weights.append(p.weight)
            continue
        for rng in split_range(root_bound(p, schedule[-1]), parts):
            tasks.append((p, schedule, rng))
            weights.append(p.weight)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]
    totals = [Fraction(0)] * len(schedule)
    for w, res in zip(weights, results):
        for k, c in enumerate(res):
            totals[k] += w * c
    if any(t.denominator != 1 for t in totals):
        raise CountError("sign-unit orbits do not divide the Cox count")
    ms = (time.perf_counter() - start) * 1000
    return [CountRecord(problem.model_id, problem.region_id, T, int(N), ms)
            for T, N in zip(schedule, totals)]


def enumerate_cox(h: HeightSpec, boundary_rays: Iterable[int], T, region: Region = ALL,
                  include_boundary: bool = False, workers: int = 1, model_id: str = "cox"):
    """Count integral points of U with height at most T.

    ``T`` may be a number (one record) or an increasing schedule (a list).
    """
    problem = cox_problem(h, boundary_rays, region, include_boundary, model_id)
    if isinstance(T, (list, tuple)):
        return count_cox(problem, T, workers)
    t = math.floor(T)
    if t < 1:
        return CountRecord(model_id, region.region_id, t, 0, 0.0)
    return count_cox(problem, [t], workers)[0]
