"""First cohomology of finite groups with coefficients in lattices.

H^1(G, M) is computed from inhomogeneous cochains: C^0 = M, C^1 = maps G -> M,
d0(m)(g) = g.m - m and d1(f)(g, h) = g.f(h) - f(gh) + f(g).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .polycore import matmul, smith_normal_form

GROUP_CAP = 10_000


class CohomologyError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    """Group on elements 0..n-1 given by its multiplication table ``table[a][b] = ab``."""

    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.table)
        if n > GROUP_CAP:
            raise CohomologyError(f"group order {n} exceeds cap {GROUP_CAP}")
        if any(sorted(row) != list(range(n)) for row in self.table) or \
                any(sorted(col) != list(range(n)) for col in zip(*self.table)):
            raise CohomologyError("multiplication table is not a Latin square")

    @property
    def order(self) -> int:
        return len(self.table)

    @cached_property
    def identity(self) -> int:
        return next(e for e in range(self.order)
                    if all(self.table[e][x] == x for x in range(self.order)))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return next(b for b in range(self.order) if self.table[a][b] == self.identity)

    def closure(self, gens: Sequence[int]) -> frozenset[int]:
        out = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(out)

    def subgroups(self) -> list[frozenset[int]]:
        """All subgroups (closures of generating sets of size <= 3; enough for order <= 15)."""
        found = set()
        els = range(self.order)
        for k in range(0, 4):
            for gens in combinations(els, k):
                found.add(self.closure(gens))
        return sorted(found, key=lambda h: (len(h), sorted(h)))

    @classmethod
    def from_permutations(cls, gens: Sequence[Sequence[int]]) -> "FiniteGroup":
        gens = [tuple(g) for g in gens]
        degree = len(gens[0]) if gens else 1
        ident = tuple(range(degree))
        elements = [ident]
        seen = {ident}
        i = 0
        while i < len(elements):
            for g in gens:
                h = tuple(g[x] for x in elements[i])
                if h not in seen:
                    seen.add(h)
                    elements.append(h)
                    if len(elements) > GROUP_CAP:
                        raise CohomologyError("group too large")
            i += 1
        index = {e: k for k, e in enumerate(elements)}
        table = tuple(tuple(index[tuple(a[x] for x in b)] for b in elements) for a in elements)
        return cls(table)


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    n, m = g.order, h.order
    table = tuple(
        tuple(g.mul(a // m, b // m) * m + h.mul(a % m, b % m) for b in range(n * m))
        for a in range(n * m)
    )
    return FiniteGroup(table)


def dihedral_group(n: int) -> FiniteGroup:
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return FiniteGroup.from_permutations([rot, ref])


def quaternion_group() -> FiniteGroup:
    # regular representation of Q8 on {1,i,j,k,-1,-i,-j,-k}, left multiplication by i and j
    li = (1, 4, 3, 6, 5, 0, 7, 2)
    lj = (2, 7, 4, 1, 6, 3, 0, 5)
    return FiniteGroup.from_permutations([li, lj])


def small_groups(max_order: int = 8) -> dict[str, FiniteGroup]:
    """One representative of every isomorphism class of groups of order <= 8."""
    c = cyclic_group
    groups = {
        "C1": c(1), "C2": c(2), "C3": c(3), "C4": c(4),
        "C2xC2": direct_product(c(2), c(2)), "C5": c(5), "C6": c(6),
        "S3": dihedral_group(3), "C7": c(7), "C8": c(8),
        "C4xC2": direct_product(c(4), c(2)),
        "C2xC2xC2": direct_product(direct_product(c(2), c(2)), c(2)),
        "D4": dihedral_group(4), "Q8": quaternion_group(),
    }
    return {k: g for k, g in groups.items() if g.order <= max_order}


def permutation_module(g: FiniteGroup, h: frozenset[int]) -> tuple[list[int], list[list[list[int]]]]:
    """Generators and matrices of Z[G/H] (left cosets, left multiplication).

    Every group element is returned as a generator, which is always valid.
    """
    cosets: list[frozenset[int]] = []
    for x in range(g.order):
        c = frozenset(g.mul(x, y) for y in h)
        if c not in cosets:
            cosets.append(c)
    gens = list(range(g.order))
    mats = []
    for s in gens:
        m = [[0] * len(cosets) for _ in cosets]
        for j, c in enumerate(cosets):
            img = frozenset(g.mul(s, x) for x in c)
            m[cosets.index(img)][j] = 1
        mats.append(m)
    return gens, mats


def _all_matrices(g: FiniteGroup, gens: Sequence[int], mats: Sequence[Sequence[Sequence[int]]]):
    if len(gens) != len(mats):
        raise CohomologyError("one matrix per generator required")
    if not mats:
        if g.order != 1:
            raise CohomologyError("generators do not generate the group")
        return {g.identity: []}, 0
    rank = len(mats[0])
    ident = [[int(i == j) for j in range(rank)] for i in range(rank)]
    rho = {g.identity: ident}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s, ms in zip(gens, mats):
                y = g.mul(x, s)
                val = matmul(rho[x], ms)
                if y in rho:
                    if rho[y] != val:
                        raise CohomologyError("generator matrices do not define an action")
                else:
                    rho[y] = val
                    nxt.append(y)
        frontier = nxt
    if len(rho) != g.order:
        raise CohomologyError("generators do not generate the group")
    for a in range(g.order):
        for b in range(g.order):
            if matmul(rho[a], rho[b]) != rho[g.mul(a, b)]:
                raise CohomologyError("generator matrices do not define an action")
    return rho, rank


def group_h1(g: FiniteGroup, gens: Sequence[int], mats: Sequence[Sequence[Sequence[int]]]) -> list[int]:
    """Invariant factors (all > 1) of H^1(G, M); the empty list means H^1 = 0."""
    rho, n = _all_matrices(g, gens, mats)
    N = g.order
    if n == 0:
        return []
    gen_set = sorted(set(gens))

    def idx(x, i):
        return x * n + i

    # cocycle equations for (s, h) with s a generator cut out the same kernel as all (g, h)
    d1 = []
    for s in gen_set:
        for h in range(N):
            sh = g.mul(s, h)
            for i in range(n):
                row = [0] * (N * n)
                for j in range(n):
                    row[idx(h, j)] += rho[s][i][j]
                row[idx(sh, i)] -= 1
                row[idx(s, i)] += 1
                d1.append(row)
    snf = smith_normal_form(d1, ncols=N * n)
    r = sum(1 for d in snf.diagonal if d != 0)
    # Z^1 has basis V[:, r:], coordinates of a cocycle c are (V^-1 c)[r:]
    d0_cols = []
    for i in range(n):
        col = [0] * (N * n)
        for x in range(N):
            for k in range(n):
                col[idx(x, k)] = rho[x][k][i] - int(k == i)
        d0_cols.append(col)
    coords = [[sum(snf.V_inv[row][t] * col[t] for t in range(N * n)) for col in d0_cols]
              for row in range(r, N * n)]
    if not coords:
        return []
    diag = smith_normal_form(coords).diagonal
    if any(d == 0 for d in diag) or len(diag) < len(coords):
        raise CohomologyError("H^1 has a free part; group not finite?")
    return [d for d in diag if d > 1]
