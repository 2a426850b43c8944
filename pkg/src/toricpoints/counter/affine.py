"""Exhaustive counting on affine models given by binomial equations.

A model is a JSON-like mapping::

    {"vars": ["x", "y", "z"],
     "equations": ["x*y - z^2"],
     "gcd_one": [["x", "y", "z"]],
     "height": {"max_of": [["x"], ["y"]]},
     "regions": {"le": ["x <= y"]}}

Each equation has at most two terms and is read as ``c1 m1 = -c2 m2``.  The
search assigns one variable at a time, always the one with the fewest
candidates under the current partial assignment:

* determined: an equation leaves it as the only unknown (integer roots);
* gcd-forced: the rest of a coprime group is already zero, so it is +-1;
* divisor: the other side of an equation is known and nonzero;
* height: a height monomial bounds it given the assigned factors;
* congruence: a known nonzero factor of one side forces a divisibility;
* equation bound: the other side of an equation is bounded.
"""
from __future__ import annotations

import json
import math
import time
from bisect import bisect_right
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
import sympy

from .cox import iroot_floor, split_range
from .records import CountRecord
from .regions import ALL, Region, parse_constraint


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Side:
    coeff: int
    exps: tuple[int, ...]


@dataclass(frozen=True)
class AffineModel:
    model_id: str
    names: tuple[str, ...]
    equations: tuple[tuple[Side, Side], ...]
    gcd_sets: tuple[tuple[int, ...], ...]
    height: tuple[tuple[int, ...], ...]
    regions: Mapping[str, Region] = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return len(self.names)


def _monomial(spec, idx: Mapping[str, int]) -> tuple[int, ...]:
    exps = [0] * len(idx)
    items = spec if isinstance(spec, (list, tuple)) else [spec]
    for tok in items:
        tok = str(tok).replace("**", "^").strip()
        name, _, power = tok.partition("^")
        name = name.strip()
        if name not in idx:
            raise ModelError(f"unknown variable {name!r} in height monomial")
        exps[idx[name]] += int(power) if power else 1
    return tuple(exps)


def load_model(document, model_id: str | None = None) -> AffineModel:
    """Parse a model from a mapping, JSON text or a path."""
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        path = Path(document)
        model_id = model_id or path.stem
        document = path.read_text(encoding="utf-8")
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ModelError(f"malformed model: {exc}") from exc
    try:
        names = tuple(str(v) for v in document["vars"])
        eq_text = list(document.get("equations", []))
        gcd_text = list(document.get("gcd_one", []))
        height_text = document["height"]["max_of"]
    except (KeyError, TypeError) as exc:
        raise ModelError(f"model missing field: {exc}") from exc
    if len(set(names)) != len(names) or not names:
        raise ModelError("variable names must be distinct and nonempty")
    idx = {n: i for i, n in enumerate(names)}
    syms = sympy.symbols(names)
    local = {n: s for n, s in zip(names, syms)}
    equations = []
    for text in eq_text:
        expr = sympy.sympify(str(text).replace("^", "**"), locals=local)
        if not expr.free_symbols <= set(syms):
            raise ModelError(f"equation {text!r} uses unknown variables")
        terms = sympy.Poly(expr, *syms).terms()
        if len(terms) > 2 or not terms:
            raise ModelError(f"equation {text!r} is not a binomial")
        if any(not c.is_Integer for _, c in terms):
            raise ModelError(f"equation {text!r} needs integer coefficients")
        (m1, c1) = terms[0]
        if len(terms) == 2:
            (m2, c2) = terms[1]
            sides = (Side(int(c1), tuple(m1)), Side(-int(c2), tuple(m2)))
        else:
            sides = (Side(int(c1), tuple(m1)), Side(0, (0,) * len(names)))
        for v in range(len(names)):
            if sides[0].exps[v] and sides[1].exps[v]:
                raise ModelError(f"equation {text!r}: variable {names[v]} on both sides")
        equations.append(sides)
    gcd_sets = []
    for g in gcd_text:
        try:
            gcd_sets.append(tuple(sorted(idx[v] for v in g)))
        except KeyError as exc:
            raise ModelError(f"unknown variable {exc} in gcd_one") from exc
    height = tuple(_monomial(m, idx) for m in height_text)
    if not height:
        raise ModelError("height needs at least one monomial")
    regions = {}
    for rid, cons in (document.get("regions") or {}).items():
        regions[rid] = Region(rid, tuple(parse_constraint(c, names) for c in cons))
    return AffineModel(model_id or str(document.get("id", "affine")), names, tuple(equations),
                       tuple(gcd_sets), height, regions)


# ---------------------------------------------------------------------------
# arithmetic helpers

_SPF_LIMIT = 1 << 23
_spf: np.ndarray | None = None


def _sieve(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx
    return spf


@lru_cache(maxsize=1 << 16)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    global _spf
    if n <= _SPF_LIMIT:
        if _spf is None or len(_spf) <= n:
            _spf = _sieve(min(_SPF_LIMIT, max(2 * n, 1 << 16)))
        out: dict[int, int] = {}
        while n > 1:
            p = int(_spf[n])
            out[p] = out.get(p, 0) + 1
            n //= p
        return tuple(sorted(out.items()))
    return tuple(sorted(sympy.factorint(n).items()))


@lru_cache(maxsize=1 << 16)
def _divisors(n: int) -> tuple[int, ...]:
    return tuple(sympy.divisors(n))


def _valuation(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _exact_roots(R: int, k: int) -> list[int]:
    """Integers v with v^k = R."""
    if R == 0:
        return [0]
    if k % 2 == 0:
        if R < 0:
            return []
        r = iroot_floor(R, k)
        return [r, -r] if r ** k == R else []
    r = iroot_floor(abs(R), k)
    if r ** k != abs(R):
        return []
    return [r if R > 0 else -r]


# ---------------------------------------------------------------------------
# search

_DETERMINED, _GCD, _DIVISOR, _HEIGHT, _CONGRUENCE, _EQBOUND = range(6)


class _Search:
    def __init__(self, model: AffineModel, tmax: int, region: Region):
        self.m = model
        self.tmax = tmax
        self.region = region
        self.heights: Counter = Counter()
        n = model.n
        self.eq_vars = [tuple(v for v in range(n) if s.exps[v] or o.exps[v]) for s, o in model.equations]
        self.mon_vars = [tuple(v for v in range(n) if e[v]) for e in model.height]
        self.cons_vars = [tuple(v for v in range(n) if c.lhs[v] or c.rhs[v]) for c in region.constraints]
        def packed(side):
            return side.coeff, tuple((v, e) for v, e in enumerate(side.exps) if e)

        # per-variable views so each node only touches what involves it
        self.eqs_of = [[(packed(s), packed(o), vs) for (s, o), vs in zip(model.equations, self.eq_vars)
                        if v in vs] for v in range(n)]
        self.sides_of = [[(packed(S), packed(O), S.exps[v]) for s, o in model.equations
                          for S, O in ((s, o), (o, s)) if S.exps[v]] for v in range(n)]
        self.gcd_of = [[g for g in model.gcd_sets if v in g] for v in range(n)]
        self.mon_of = [[(e, vs) for e, vs in zip(model.height, self.mon_vars) if v in vs] for v in range(n)]
        self.cons_of = [[(c, vs) for c, vs in zip(region.constraints, self.cons_vars) if v in vs]
                        for v in range(n)]

    # -- side evaluation ---------------------------------------------------
    @staticmethod
    def _side_value(side, a, skip: int = -1):
        """(value of the assigned part incl. coefficient, unknown vars) of a packed side."""
        val, support = side
        unknown = []
        for v, e in support:
            if v == skip:
                continue
            x = a[v]
            if x is None:
                unknown.append(v)
            else:
                val *= x ** e
        return val, unknown

    def _height_bound(self, v: int, a) -> int | None:
        best = None
        for e, vs in self.mon_of[v]:
            k = e[v]
            P = 1
            ok = True
            for u in vs:
                eu = e[u]
                if u == v:
                    continue
                if a[u] is None or a[u] == 0:
                    ok = False
                    break
                P *= abs(a[u]) ** eu
            if ok:
                b = iroot_floor(self.tmax // P, k)
                best = b if best is None else min(best, b)
        return best

    def _options(self, v: int, a):
        """Best (count, rank, candidates) for variable v, or None if unbounded."""
        best = None

        def offer(rank, cands):
            nonlocal best
            cnt = len(cands) if isinstance(cands, list) else cands[0]
            if best is None or (cnt, rank) < (best[0], best[1]):
                best = (cnt, rank, cands)

        hb = self._height_bound(v, a)
        for g in self.gcd_of[v]:
            if all(a[u] == 0 for u in g if u != v):
                offer(_GCD, [1, -1])
        for S, O, k in self.sides_of[v]:
            s_val, s_unk = self._side_value(S, a, skip=v)
            o_val, o_unk = self._side_value(O, a)
            s_known = not s_unk or s_val == 0
            o_known = not o_unk or o_val == 0
            if s_known and o_known:
                if s_val == 0:
                    if o_val != 0:
                        offer(_DETERMINED, [])
                    continue
                if o_val % s_val:
                    offer(_DETERMINED, [])
                    continue
                offer(_DETERMINED, _exact_roots(o_val // s_val, k))
            elif o_known and o_val != 0:
                # v^k * s_val * (unknowns) = o_val
                if s_val == 0 or o_val % s_val:
                    offer(_DIVISOR, [])
                    continue
                R = abs(o_val // s_val)
                ds = [d for d in _divisors(R) if R % d ** k == 0] if k > 1 else list(_divisors(R))
                offer(_DIVISOR, ds + [-d for d in ds])
            elif s_known and s_val != 0 and o_unk and o_val != 0:
                # o_val * (unknowns) = s_val * v^k
                bound = hb
                eb = self._eq_bound(O, o_val, o_unk, s_val, k, a)
                if eb is not None:
                    bound = eb if bound is None else min(bound, eb)
                    offer(_EQBOUND, (2 * eb + 1, "range", eb, 1))
                if bound is not None:
                    offer(_CONGRUENCE, self._congruence(v, k, o_val, o_unk, s_val, bound, a))
        if hb is not None:
            offer(_HEIGHT, (2 * hb + 1, "range", hb, 1))
        return best

    def _eq_bound(self, O, o_val: int, o_unk, s_val: int, k: int, a):
        """|v|^k <= |o_val| prod bound_u^e_u / |s_val| when each unknown u has a height bound."""
        total = abs(o_val)
        for u in o_unk:
            b = self._height_bound(u, a)
            if b is None:
                return None
            total *= b ** dict(O[1])[u]
        return iroot_floor(total // abs(s_val), k)

    def _congruence(self, v, k, o_val, o_unk, s_val, bound, a):
        """Candidates for v from o_val * (unknowns) = s_val * v^k.

        Every prime of m = o_val / gcd(o_val, s_val) divides v.  If the single
        unknown u on the other side shares a coprime group with v whose known
        members are all divisible by p, then p does not divide u and the
        valuation of v at p is determined exactly.
        """
        m = abs(o_val) // math.gcd(o_val, s_val)
        g = None
        if len(o_unk) == 1:
            u = o_unk[0]
            for grp in self.m.gcd_sets:
                if u in grp and v in grp and all(a[w] is not None for w in grp if w not in (u, v)):
                    d = 0
                    for w in grp:
                        if w not in (u, v):
                            d = math.gcd(d, a[w])
                    g = d if g is None else math.gcd(g, d)
        step, exact = 1, []
        for p, e in _factor(m):
            if g is not None and g % p == 0:
                diff = _valuation(abs(o_val), p) - _valuation(abs(s_val), p)
                if diff % k:
                    return []
                step *= p ** (diff // k)
                exact.append(p)
            else:
                step *= p ** (-(-e // k))
        est = 2 * (bound // step) + (0 if exact else 1)
        return (est, "prog", bound, step, tuple(exact))

    @staticmethod
    def _expand(cands):
        if isinstance(cands, list):
            return cands
        _, _, bound, step, *rest = cands
        exact = rest[0] if rest else ()
        values = range(-(bound // step) * step, bound + 1, step)
        if not exact:
            return values
        return [x for x in values if x and all((x // step) % p for p in exact)]

    # -- consistency -------------------------------------------------------
    def _consistent(self, v: int, a) -> bool:
        for S, O, vars_ in self.eqs_of[v]:
            if None not in [a[u] for u in vars_]:
                if self._side_value(S, a)[0] != self._side_value(O, a)[0]:
                    return False
        for g in self.gcd_of[v]:
            d = 0
            for u in g:
                x = a[u]
                if x is None:
                    break
                d = math.gcd(d, x)
            else:
                if d != 1:
                    return False
        for e, vars_ in self.mon_of[v]:
            val = 1
            for u in vars_:
                x = a[u]
                if x is None:
                    break
                val *= abs(x) ** e[u]
            else:
                if val > self.tmax:
                    return False
        for c, vars_ in self.cons_of[v]:
            if None not in [a[u] for u in vars_]:
                if not c.holds([abs(x) if x is not None else 1 for x in a]):
                    return False
        return True

    def _leaf(self, a):
        h = 0
        for e, vars_ in zip(self.m.height, self.mon_vars):
            val = 1
            for u in vars_:
                val *= abs(a[u]) ** e[u]
            h = max(h, val)
        if h >= 1:
            self.heights[h] += 1

    def choose(self, a):
        best = None
        for v in range(self.m.n):
            if a[v] is not None:
                continue
            opt = self._options(v, a)
            if opt is None:
                continue
            if opt[0] <= 1:
                return v, opt[2]
            key = (opt[0], opt[1], v)
            if best is None or key < best[0]:
                best = (key, v, opt[2])
        if best is None:
            free = [self.m.names[v] for v in range(self.m.n) if a[v] is None]
            raise ModelError(f"variables {free} are unbounded under the height")
        return best[1], best[2]

    def run(self, a, root_slice: tuple[int, int] | None = None):
        if all(x is not None for x in a):
            self._leaf(a)
            return
        v, cands = self.choose(a)
        values = self._expand(cands)
        if root_slice is not None:
            values = list(values)[root_slice[0]:root_slice[1]]
        for x in values:
            a[v] = x
            if self._consistent(v, a):
                self.run(a)
        a[v] = None


def _affine_task(args):
    model, tmax, region, rng = args
    s = _Search(model, tmax, region)
    s.run([None] * model.n, rng)
    return dict(s.heights)


def affine_heights(model: AffineModel, tmax: int, region: Region = ALL,
                   workers: int = 1, partition: int | None = None) -> Counter:
    """Histogram of heights of all solutions with height <= tmax."""
    tmax = int(math.floor(tmax))
    if tmax < 1:
        return Counter()
    if workers <= 1 and not partition:
        s = _Search(model, tmax, region)
        s.run([None] * model.n)
        return s.heights
    probe = _Search(model, tmax, region)
    _, cands = probe.choose([None] * model.n)
    size = len(probe._expand(cands))
    parts = partition or workers
    slices = [(lo - 1, hi) for lo, hi in split_range(size, parts)] if size else [(0, 0)]
    tasks = [(model, tmax, region, sl) for sl in slices]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts_out = list(ex.map(_affine_task, tasks))
    else:
        parts_out = [_affine_task(t) for t in tasks]
    out: Counter = Counter()
    for d in parts_out:
        out.update(d)
    return out


def cumulative_counts(heights: Counter, schedule: Sequence[int]) -> list[int]:
    keys = sorted(heights)
    acc, run = [], 0
    for k in keys:
        run += heights[k]
        acc.append(run)
    out = []
    for T in schedule:
        i = bisect_right(keys, math.floor(T))
        out.append(acc[i - 1] if i else 0)
    return out


def enumerate_affine(model: AffineModel, T, region: Region | str = ALL, workers: int = 1):
    """Count solutions with height <= T; ``T`` a number or an increasing schedule."""
    if isinstance(region, str):
        region = ALL if region == "all" else model.regions[region]
    schedule = list(T) if isinstance(T, (list, tuple)) else [T]
    start = time.perf_counter()
    hist = affine_heights(model, max(schedule), region, workers)
    counts = cumulative_counts(hist, schedule)
    ms = (time.perf_counter() - start) * 1000
    recs = [CountRecord(model.model_id, region.region_id, int(math.floor(t)), n, ms)
            for t, n in zip(schedule, counts)]
    return recs if isinstance(T, (list, tuple)) else recs[0]
