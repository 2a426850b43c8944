"""Clemens complexes of toric boundaries and the adelic Picard group of a face.

A face of the Clemens complex of ``D = sum of D_alpha`` (alpha in the
boundary rays) is the ray set of a cone of the fan all of whose rays are
boundary rays.  A face specification picks one such face per archimedean
place.

Pic(X; A) is presented as

    Z[rays] x prod_v Z[A_v]  /  ( image of M ,  D_alpha - sum_{v : alpha in A_v} [alpha]_v )

so the class of ``D_alpha`` is identified with the sum of its per-place
copies, and boundary components outside every ``A_v`` become trivial.
Under this identification the effective cone (ray classes together with
the per-place generators) is pointed exactly when the face carries no
analytic obstruction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .fan import Fan, FanError, is_smooth, subfan
from .picard import DivisorClass, cokernel, picard_group
from .polycore import ConeData, dual_cone, matvec


class ClemensError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ClemensFace:
    rays: frozenset[int] = frozenset()

    @property
    def dim(self) -> int:
        return len(self.rays) - 1

    def __repr__(self):
        return f"ClemensFace({sorted(self.rays)})"


@dataclass(frozen=True)
class PlaceFace:
    place: str
    kind: str  # "real" | "complex"
    face: ClemensFace


@dataclass(frozen=True)
class AdelicFaceSpec:
    entries: tuple[PlaceFace, ...] = ()

    @classmethod
    def single(cls, rays: Iterable[int], kind: str = "real", place: str = "inf") -> "AdelicFaceSpec":
        return cls((PlaceFace(place, kind, ClemensFace(frozenset(rays))),))

    @property
    def dim(self) -> int:
        return sum(len(e.face.rays) for e in self.entries) - 1

    @property
    def support(self) -> frozenset[int]:
        out: set[int] = set()
        for e in self.entries:
            out |= e.face.rays
        return frozenset(out)


def clemens_complex(f: Fan, boundary_rays: Iterable[int]) -> list[ClemensFace]:
    """All faces, the empty one first, ordered by size then ray indices."""
    b = frozenset(boundary_rays)
    _check_boundary(f, b)
    faces = [ClemensFace(c) for c in f.cones if c <= b]
    return sorted(faces, key=lambda c: (len(c.rays), sorted(c.rays)))


def _check_boundary(f: Fan, b: frozenset[int]) -> None:
    for i in b:
        if not 0 <= i < f.n_rays:
            raise ClemensError(f"boundary ray index {i} out of range")


def _check_spec(f: Fan, b: frozenset[int], spec: AdelicFaceSpec) -> None:
    _check_boundary(f, b)
    names = [e.place for e in spec.entries]
    if len(set(names)) != len(names):
        raise ClemensError("duplicate place in face specification")
    for e in spec.entries:
        if e.kind not in ("real", "complex"):
            raise ClemensError(f"place {e.place}: kind must be 'real' or 'complex'")
        a = e.face.rays
        if not a <= b:
            raise ClemensError(f"place {e.place}: face {sorted(a)} uses non-boundary rays")
        if a and not f.is_cone(a):
            raise ClemensError(f"place {e.place}: face {sorted(a)} is not a cone of the fan")


def _u_rays(f: Fan, b: frozenset[int]) -> list[int]:
    return [i for i in range(f.n_rays) if i not in b]


class Generator(NamedTuple):
    label: str
    coords: tuple[int, ...]  # ambient coordinate vector


@dataclass(frozen=True)
class AdelicPicard:
    fan: Fan
    boundary: frozenset[int]
    spec: AdelicFaceSpec
    labels: tuple[str, ...]
    free_rank: int
    torsion: tuple[int, ...]
    class_matrix: tuple[tuple[int, ...], ...] = field(repr=False)
    lift_matrix: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def ambient(self) -> int:
        return len(self.labels)

    def class_of(self, vec: Sequence[int]) -> DivisorClass:
        vec = tuple(int(x) for x in vec)
        if len(vec) != self.ambient:
            raise ClemensError(f"vector has {len(vec)} entries, expected {self.ambient}")
        coords = matvec(self.class_matrix, vec)
        free = tuple(coords[: self.free_rank])
        tors = tuple(c % d for c, d in zip(coords[self.free_rank:], self.torsion))
        return DivisorClass(free, tors, vec)

    def from_rays(self, lam: Sequence[int]) -> DivisorClass:
        """Image of a class of Pic X given by ray coefficients."""
        lam = list(lam)
        if len(lam) != self.fan.n_rays:
            raise ClemensError(f"class vector has {len(lam)} entries, expected {self.fan.n_rays}")
        return self.class_of(lam + [0] * (self.ambient - self.fan.n_rays))

    def ray_class(self, i: int) -> DivisorClass:
        return self.from_rays([int(j == i) for j in range(self.fan.n_rays)])

    def lift(self, free: Sequence) -> list:
        coeffs = list(free) + [0] * len(self.torsion)
        return [sum(c * row[j] for j, c in enumerate(coeffs)) for row in self.lift_matrix]

    @cached_property
    def generators(self) -> tuple[Generator, ...]:
        """Irreducible generators of Eff: every ray, then each per-place face ray."""
        out = []
        r = self.fan.n_rays
        for i in range(r):
            out.append(Generator(f"D{i}", tuple(int(k == i) for k in range(self.ambient))))
        for k in range(r, self.ambient):
            out.append(Generator(self.labels[k], tuple(int(j == k) for j in range(self.ambient))))
        return tuple(out)

    def generator_classes(self) -> list[DivisorClass]:
        return [self.class_of(g.coords) for g in self.generators]

    @cached_property
    def effective(self) -> ConeData:
        if self.free_rank == 0:
            return ConeData(0, ())
        return ConeData.from_vectors([c.free for c in self.generator_classes()],
                                     ambient_rank=self.free_rank)

    @cached_property
    def canonical(self) -> DivisorClass:
        """K_(X;A), the image of K_X + D."""
        r = self.fan.n_rays
        return self.from_rays([0 if i in self.boundary else -1 for i in range(r)])

    @property
    def anticanonical(self) -> DivisorClass:
        k = self.canonical
        return self.class_of([-x for x in k.lam])


def adelic_picard(f: Fan, boundary_rays: Iterable[int], spec: AdelicFaceSpec) -> AdelicPicard:
    b = frozenset(boundary_rays)
    _check_spec(f, b, spec)
    if not is_smooth(f):
        raise ClemensError("adelic Picard group requires a smooth fan")
    if not f.rays_span():
        raise ClemensError("nontrivial global units: rays do not span the lattice")
    r, n = f.n_rays, f.lattice_rank
    labels = [f"D{i}" for i in range(r)]
    slot: dict[tuple[int, int], int] = {}
    for v, e in enumerate(spec.entries):
        for a in sorted(e.face.rays):
            slot[(v, a)] = len(labels)
            labels.append(f"{e.place}:{a}")
    N = len(labels)
    cols = []
    for j in range(n):
        cols.append([f.rays[i][j] for i in range(r)] + [0] * (N - r))
    for a in sorted(b):
        col = [0] * N
        col[a] = 1
        for v in range(len(spec.entries)):
            if (v, a) in slot:
                col[slot[(v, a)]] = -1
        cols.append(col)
    ck = cokernel(cols, N)
    return AdelicPicard(f, b, spec, tuple(labels), ck.free_rank, ck.torsion,
                        ck.class_matrix, ck.lift_matrix)


def pic_u(f: Fan, boundary_rays: Iterable[int]):
    """Picard group of U, computed on the subfan of non-boundary cones."""
    b = frozenset(boundary_rays)
    _check_boundary(f, b)
    keep = _u_rays(f, b)
    if not keep:
        raise ClemensError("U has no rays; the torus has nontrivial units")
    try:
        return picard_group(subfan(f, keep))
    except FanError as exc:
        raise ClemensError(str(exc)) from exc


class ObstructionReport(NamedTuple):
    obstructed: bool
    witness: tuple[int, ...] | None


def analytic_obstruction(f: Fan, boundary_rays: Iterable[int], spec: AdelicFaceSpec) -> ObstructionReport:
    """Look for a character m != 0 regular on U and on every U_{Z_v}.

    Such m must pair nonnegatively with every ray of U and every ray of every A_v.
    """
    b = frozenset(boundary_rays)
    _check_spec(f, b, spec)
    idx = sorted(set(_u_rays(f, b)) | spec.support)
    cone = ConeData.from_vectors([f.rays[i] for i in idx], ambient_rank=f.lattice_rank)
    dual = dual_cone(cone)
    if not dual.generators:
        return ObstructionReport(False, None)
    return ObstructionReport(True, dual.generators[-1])


class ArchimedeanConstant(NamedTuple):
    """The number ``rational * 2**pow2 * pi**powpi``."""

    pow2: int
    powpi: int
    rational: Fraction = Fraction(1)

    @property
    def value(self) -> float:
        return float(self.rational) * 2.0 ** self.pow2 * math.pi ** self.powpi


def archimedean_constant(spec: AdelicFaceSpec) -> ArchimedeanConstant:
    """Product over places of 2 per real face ray and 2 pi per complex face ray."""
    real = sum(len(e.face.rays) for e in spec.entries if e.kind == "real")
    cplx = sum(len(e.face.rays) for e in spec.entries if e.kind == "complex")
    return ArchimedeanConstant(real + cplx, cplx)
