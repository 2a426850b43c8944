"""Exact integer/rational linear algebra and polyhedral cones.

Everything here works on Python ``int`` and :class:`fractions.Fraction`;
there are no tolerances. Matrices are plain lists of rows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import NamedTuple, Sequence

IntMatrix = list[list[int]]


class PolyhedralError(ValueError):
    """Base class for cone computation failures."""


class NotPointedError(PolyhedralError):
    pass


class NotInConeError(PolyhedralError):
    pass


# ---------------------------------------------------------------------------
# small exact helpers

def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def is_primitive(v: Sequence[int]) -> bool:
    return reduce(gcd, (int(x) for x in v), 0) == 1


def row_echelon(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Reduced row echelon form over Q, zero rows dropped."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out: list[list[Fraction]] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return [row for row in m[:r]]


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_echelon(rows)) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Primitive integer basis (rational span) of {x : rows . x = 0}."""
    rref = row_echelon(rows) if rows else []
    pivots = []
    for row in rref:
        pivots.append(next(i for i, x in enumerate(row) if x != 0))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rref, pivots):
            v[p] = -row[f]
        basis.append(primitive(v))
    return basis


def det(rows: Sequence[Sequence]):
    """Determinant by fraction-free Bareiss elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num / prev if isinstance(num, Fraction) else _exact_div(num, prev)
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a // b
    return Fraction(a) / b


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One rational solution of a.x = b, or None if inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    rref = row_echelon(aug)
    x = [Fraction(0)] * n
    for row in rref:
        p = next(i for i, v in enumerate(row) if v != 0)
        if p == n:
            return None
        x[p] = row[n]
    return x


def in_span(basis: Sequence[Sequence], v: Sequence) -> bool:
    if not basis:
        return all(x == 0 for x in v)
    return rank(list(basis) + [list(v)]) == rank(basis)


# ---------------------------------------------------------------------------
# Smith normal form

class SmithForm(NamedTuple):
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    """Return U, S, V (and inverses) with U.m.V = S in Smith normal form.

    ``ncols`` is only needed for matrices with zero rows.
    """
    rows = len(m)
    cols = len(m[0]) if rows else (ncols or 0)
    a = [[int(x) for x in r] for r in m]
    U, Ui = identity(rows), identity(rows)
    V, Vi = identity(cols), identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]
        for r in Ui:
            r[src] -= q * r[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for r in a:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]
        Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    for t in range(min(rows, cols)):
        while True:
            piv = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] != 0 and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            if piv[0] != t:
                swap_rows(t, piv[0])
            if piv[1] != t:
                swap_cols(t, piv[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if piv is None:
            break
        if a[t][t] < 0:
            negate_row(t)
    return SmithForm(U, a, V, Ui, Vi)


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    return smith_normal_form(m).diagonal


def integer_kernel(m: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Lattice basis of {x in Z^n : m.x = 0}, as columns of the returned list of vectors."""
    snf = smith_normal_form(m, ncols=ncols)
    r = sum(1 for d in snf.diagonal if d != 0)
    return [[snf.V[i][j] for i in range(ncols)] for j in range(r, ncols)]


def lattice_index(vectors: Sequence[Sequence[int]]) -> int:
    """Index of the lattice spanned by ``vectors`` in its saturation."""
    if not vectors:
        return 1
    diag = [d for d in invariant_factors(vectors) if d != 0]
    out = 1
    for d in diag:
        out *= d
    return out


# ---------------------------------------------------------------------------
# cones

def _lex_sorted(vs):
    return tuple(sorted(set(vs)))


@dataclass(frozen=True)
class ConeData:
    """Cone generated by primitive integer vectors in a lattice of rank ``ambient_rank``.

    ``lattice`` holds a basis of the lattice as columns in ambient
    coordinates; ``None`` means the standard lattice.
    """

    ambient_rank: int
    generators: tuple[tuple[int, ...], ...]
    lattice: tuple[tuple[int, ...], ...] | None = None
    _checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if len(g) != self.ambient_rank:
                raise PolyhedralError(f"generator {g} has wrong length")
            if self._checked and not is_primitive(self._to_lattice(g)):
                raise PolyhedralError(f"generator {g} is not primitive")

    @classmethod
    def from_vectors(cls, vectors, ambient_rank: int | None = None, lattice=None) -> "ConeData":
        """Primitivize, drop zeros and duplicates (order preserved)."""
        vectors = [list(v) for v in vectors]
        if ambient_rank is None:
            if not vectors:
                raise PolyhedralError("ambient_rank needed for an empty generator list")
            ambient_rank = len(vectors[0])
        out = []
        for v in vectors:
            p = _primitive_in(v, lattice)
            if any(p) and p not in out:
                out.append(p)
        return cls(ambient_rank, tuple(out), lattice)

    def _to_lattice(self, v):
        if self.lattice is None:
            return v
        coords = solve(transpose(self.lattice), v)
        return [int(c) if c.denominator == 1 else c for c in coords]

    @cached_property
    def dim(self) -> int:
        return rank(self.generators)

    @cached_property
    def pointed(self) -> bool:
        """True iff the cone contains no line."""
        if not self.generators:
            return True
        return rank(dual_cone(self).generators) == self.ambient_rank

    @cached_property
    def inequalities(self) -> tuple[tuple[int, ...], ...]:
        """Generators of the dual cone: the cone is {x : f.x >= 0 for all f}."""
        return dual_cone(self).generators

    def contains(self, x) -> bool:
        return all(dot(f, x) >= 0 for f in self.inequalities)

    def in_interior(self, x) -> bool:
        """Relative-interior membership."""
        if not self.contains(x):
            return False
        return all(dot(f, x) > 0 for f in self.inequalities
                   if any(dot(f, g) != 0 for g in self.generators))

    @property
    def is_simplicial(self) -> bool:
        return len(self.generators) == self.dim


def _primitive_in(v, lattice) -> tuple[int, ...]:
    if lattice is None:
        return primitive(v)
    coords = solve(transpose(lattice), v)
    p = primitive(coords)
    return tuple(int(x) for x in matvec(transpose(lattice), p))


def _dual_lattice(lattice):
    """Basis (columns) of the dual lattice, in ambient coordinates."""
    if lattice is None:
        return None
    b = transpose(lattice)  # rows are basis vectors
    n = len(b)
    inv_cols = []
    for i in range(n):
        e = [int(i == j) for j in range(n)]
        inv_cols.append(solve(b, e))  # B^T-inverse columns
    return tuple(tuple(x for x in col) for col in inv_cols)


def double_description(inequalities: Sequence[Sequence[int]], n: int):
    """Generators of {x in Q^n : a.x >= 0 for each a}.

    Returns ``(lines, rays)``: a basis of the lineality space and the
    extreme rays modulo it, all as primitive integer tuples.
    """
    lines: list[list[int]] = [list(r) for r in identity(n)]
    rays: list[tuple[list[int], frozenset]] = []
    processed = 0
    for a in inequalities:
        a = [int(x) for x in a]
        if not any(a):
            continue
        idx = processed
        processed += 1
        pivot = next((l for l in lines if dot(a, l) != 0), None)
        if pivot is not None:
            lines.remove(pivot)
            if dot(a, pivot) < 0:
                pivot = [-x for x in pivot]
            ap = dot(a, pivot)
            lines = [list(primitive([ap * x - dot(a, l) * y for x, y in zip(l, pivot)])) for l in lines]
            new_rays = []
            for r, tight in rays:
                ar = dot(a, r)
                rr = list(primitive([ap * x - ar * y for x, y in zip(r, pivot)]))
                new_rays.append((rr, tight | {idx}))
            new_rays.append((list(primitive(pivot)), frozenset(range(idx))))
            rays = new_rays
            continue
        pos, zero, neg = [], [], []
        for r, tight in rays:
            s = dot(a, r)
            (pos if s > 0 else neg if s < 0 else zero).append((r, tight))
        new_rays = pos + [(r, t | {idx}) for r, t in zero]
        for p, tp in pos:
            for q, tq in neg:
                common = tp & tq
                adjacent = True
                for r, tr in rays:
                    if r is p or r is q:
                        continue
                    if common <= tr:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                ap, aq = dot(a, p), dot(a, q)
                comb = list(primitive([ap * y - aq * x for x, y in zip(p, q)]))
                new_rays.append((comb, common | {idx}))
        rays = new_rays
    line_basis = [tuple(primitive(r)) for r in row_echelon(lines)] if lines else []
    # canonical ray representatives: project off the lineality space
    out_rays = []
    for r, _ in rays:
        if line_basis:
            r = _project_off(r, line_basis)
        p = primitive(r)
        if any(p) and p not in out_rays:
            out_rays.append(p)
    return line_basis, out_rays


def _project_off(v, basis):
    """Orthogonal projection of v onto the complement of span(basis)."""
    g = [[Fraction(dot(b, c)) for c in basis] for b in basis]
    rhs = [Fraction(dot(b, v)) for b in basis]
    coef = solve(g, rhs)
    return [Fraction(x) - sum(c * b[i] for c, b in zip(coef, basis)) for i, x in enumerate(v)]


def dual_cone(c: ConeData) -> ConeData:
    """Dual cone {f : f(x) >= 0 for x in c}, generators sorted lexicographically.

    Lines of the dual are returned as pairs of opposite generators.
    """
    n = c.ambient_rank
    lines, rays = double_description(c.generators, n)
    gens = list(rays)
    for l in lines:
        gens.append(tuple(l))
        gens.append(tuple(-x for x in l))
    dual_lat = _dual_lattice(c.lattice)
    if dual_lat is not None:
        gens = [_primitive_in(g, dual_lat) for g in gens]
    return ConeData(n, _lex_sorted(gens), dual_lat, _checked=False)


class MinimalFace(NamedTuple):
    cone: ConeData
    codim: int


def minimal_face_containing(c: ConeData, x) -> MinimalFace:
    """The face of ``c`` having ``x`` in its relative interior."""
    ineq = c.inequalities
    if any(dot(f, x) < 0 for f in ineq):
        raise NotInConeError(f"point {tuple(x)} is not in the cone")
    tight = [f for f in ineq if dot(f, x) == 0]
    gens = [g for g in c.generators if all(dot(f, g) == 0 for f in tight)]
    face = ConeData(c.ambient_rank, tuple(gens), c.lattice, _checked=False)
    return MinimalFace(face, c.dim - face.dim)


def lattice_coordinates(c: ConeData, v):
    return c._to_lattice(v)


def simplicial_index(c: ConeData) -> int:
    """Lattice index of the generators of a simplicial cone in its saturated span."""
    vecs = [list(c._to_lattice(g)) for g in c.generators]
    if any(isinstance(x, Fraction) for v in vecs for x in v):
        raise PolyhedralError("generator not in lattice")
    return lattice_index(vecs)


def triangulate(c: ConeData, order: Sequence[int] | None = None) -> list[ConeData]:
    """Placing triangulation; generators inserted lexicographically unless ``order`` is given.

    ``order`` indexes into the lexicographically sorted generator list.
    """
    if not c.pointed:
        raise NotPointedError("cannot triangulate a cone containing a line")
    gens = sorted(c.generators)
    if order is None:
        order = range(len(gens))
    basis: list[int] = []
    simplices: list[tuple[int, ...]] = []
    for vi in order:
        v = gens[vi]
        if not simplices:
            simplices, basis = [(vi,)], [vi]
            continue
        bvecs = [gens[i] for i in basis]
        if not in_span(bvecs, v):
            simplices = [s + (vi,) for s in simplices]
            basis.append(vi)
            continue
        bt = transpose(bvecs)
        coords = {}

        def coord(i):
            if i not in coords:
                coords[i] = solve(bt, gens[i])
            return coords[i]

        facet_count: dict[frozenset, list] = {}
        for s in simplices:
            for opp in s:
                f = frozenset(s) - {opp}
                facet_count.setdefault(f, []).append(opp)
        added = []
        cv = coord(vi)
        for f, opps in facet_count.items():
            if len(opps) != 1:
                continue
            fl = sorted(f)
            rows = [coord(i) for i in fl]
            s_opp = det(rows + [coord(opps[0])])
            s_v = det(rows + [cv])
            if s_v * s_opp < 0:
                added.append(tuple(fl) + (vi,))
        simplices.extend(added)
    return [ConeData(c.ambient_rank, tuple(gens[i] for i in s), c.lattice, _checked=False)
            for s in simplices]
