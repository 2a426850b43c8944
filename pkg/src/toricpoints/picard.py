"""Picard groups of toric varieties, effective cones and anticanonical classes.

Coordinates on Pic are fixed by the Smith normal form ``U R V = S`` of the
ray matrix ``R`` (rows ``n_rho``): a ray-coefficient vector ``lam`` has
class ``U lam``, whose entries past the rank of ``R`` are the free
coordinates and whose entries with invariant factor ``d > 1`` are torsion
coordinates read mod ``d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .fan import Fan, GroupAction
from .polycore import ConeData, matvec, rank, smith_normal_form

EffectiveCone = ConeData


class PicardError(ValueError):
    pass


@dataclass(frozen=True)
class DivisorClass:
    free: tuple[int, ...]
    torsion: tuple[int, ...] = ()
    lam: tuple[int, ...] | None = None

    def __eq__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.free == other.free and self.torsion == other.torsion

    def __hash__(self):
        return hash((self.free, self.torsion))


@dataclass(frozen=True)
class PicardData:
    fan: Fan
    ray_count: int
    free_rank: int
    torsion: tuple[int, ...]
    class_matrix: tuple[tuple[int, ...], ...]   # rows: free coords then torsion coords
    lift_matrix: tuple[tuple[int, ...], ...]    # columns of U^-1 for those coords

    def class_of(self, lam: Sequence[int]) -> DivisorClass:
        lam = tuple(int(x) for x in lam)
        if len(lam) != self.ray_count:
            raise PicardError(f"class vector has {len(lam)} entries, expected {self.ray_count}")
        coords = matvec(self.class_matrix, lam)
        free = tuple(coords[: self.free_rank])
        tors = tuple(c % d for c, d in zip(coords[self.free_rank:], self.torsion))
        return DivisorClass(free, tors, lam)

    def ray_class(self, i: int) -> DivisorClass:
        return self.class_of([int(j == i) for j in range(self.ray_count)])

    def lift(self, free: Sequence[int]) -> list[int]:
        """A ray-coefficient vector whose class has the given free part and zero torsion."""
        k = len(self.torsion)
        coeffs = list(free) + [0] * k
        return [sum(c * row[j] for j, c in enumerate(coeffs)) for row in self.lift_matrix]


class Cokernel(NamedTuple):
    free_rank: int
    torsion: tuple[int, ...]
    class_matrix: tuple[tuple[int, ...], ...]
    lift_matrix: tuple[tuple[int, ...], ...]


def cokernel(columns: Sequence[Sequence[int]], ambient: int) -> Cokernel:
    """Presentation of Z^ambient / (span of the given vectors) in SNF coordinates."""
    if columns:
        m = [[col[i] for col in columns] for i in range(ambient)]
        snf = smith_normal_form(m, ncols=len(columns))
        diag = snf.diagonal
        U, U_inv = snf.U, snf.U_inv
    else:
        diag = []
        U = U_inv = [[int(i == j) for j in range(ambient)] for i in range(ambient)]
    rk = sum(1 for d in diag if d != 0)
    tors_idx = [i for i in range(rk) if diag[i] > 1]
    free_idx = list(range(rk, ambient))
    keep = free_idx + tors_idx
    rows = tuple(tuple(U[i]) for i in keep)
    lift = tuple(tuple(U_inv[row][c] for c in keep) for row in range(ambient))
    return Cokernel(len(free_idx), tuple(diag[i] for i in tors_idx), rows, lift)


def picard_group(f: Fan) -> PicardData:
    """Cokernel of M -> Z[rays] for a fan whose rays span the lattice."""
    if not f.rays_span():
        raise PicardError("nontrivial global units: rays do not span the lattice")
    r, n = f.n_rays, f.lattice_rank
    cols = [[f.rays[i][j] for i in range(r)] for j in range(n)]
    ck = cokernel(cols, r)
    return PicardData(f, r, ck.free_rank, ck.torsion, ck.class_matrix, ck.lift_matrix)


def anticanonical_class(p: PicardData) -> DivisorClass:
    return p.class_of([1] * p.ray_count)


def effective_cone(p: PicardData) -> EffectiveCone:
    """Cone in Pic_R spanned by the ray classes (torsion projected away)."""
    vecs = [p.ray_class(i).free for i in range(p.ray_count)]
    if p.free_rank == 0:
        return ConeData(0, ())
    return ConeData.from_vectors(vecs, ambient_rank=p.free_rank)


def big_test(e: EffectiveCone, L: DivisorClass) -> bool:
    """True iff the free part of L lies in the interior of e."""
    if e.ambient_rank == 0 or e.dim < e.ambient_rank:
        return False
    return all(sum(a * b for a, b in zip(h, L.free)) > 0 for h in e.inequalities)


def induced_matrices(p: PicardData, a: GroupAction) -> list[list[list[int]]]:
    """Matrices of the group elements acting on the free part of Pic."""
    out = []
    k = p.free_rank
    for g in a.elements:
        cols = []
        for j in range(k):
            e = [int(i == j) for i in range(k)]
            lam = p.lift(e)
            moved = [0] * p.ray_count
            for rho, c in enumerate(lam):
                moved[g[rho]] = c
            cols.append(list(p.class_of(moved).free))
        out.append([[cols[j][i] for j in range(k)] for i in range(k)])
    return out


def invariant_picard_rank(p: PicardData, a: GroupAction) -> int:
    """Rank of the fixed part of the free Picard lattice."""
    k = p.free_rank
    if k == 0:
        return 0
    rows = []
    for m in induced_matrices(p, a):
        for i in range(k):
            rows.append([m[i][j] - int(i == j) for j in range(k)])
    return k - rank(rows)
