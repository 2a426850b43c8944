"""Fujita invariant, b-invariant, adjoint decomposition and growth predictions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .clemens import (
    AdelicFaceSpec, AdelicPicard, ArchimedeanConstant, adelic_picard, analytic_obstruction,
    archimedean_constant,
)
from .fan import Fan
from .picard import DivisorClass, big_test
from .polycore import ConeData, double_description, dot, minimal_face_containing, rank


class InvariantError(ValueError):
    pass


def _check_cone(ap: AdelicPicard) -> ConeData:
    eff = ap.effective
    if ap.free_rank == 0:
        raise InvariantError("Pic(X;A) has rank 0: no big classes")
    if not eff.pointed:
        raise InvariantError("effective cone is not pointed (obstructed face)")
    return eff


def _adjoint_vector(ap: AdelicPicard, L: DivisorClass, a) -> list[Fraction]:
    return [Fraction(k) + a * l for k, l in zip(ap.canonical.free, L.free)]


def fujita_a(ap: AdelicPicard, L: DivisorClass) -> Fraction:
    """inf{t : K + tL in Eff}, exact.

    With L in the interior every facet form h has h.L > 0, so the
    constraint h.(K + tL) >= 0 reads t >= -h.K / h.L and the infimum is
    the largest of these ratios.
    """
    eff = _check_cone(ap)
    if not big_test(eff, L):
        raise InvariantError(f"class {L.free} is not big")
    K = ap.canonical.free
    a = max(Fraction(-dot(h, K), dot(h, L.free)) for h in eff.inequalities)
    if not eff.contains(_adjoint_vector(ap, L, a)) or eff.contains(
            _adjoint_vector(ap, L, a - Fraction(1, 1000))):
        raise InvariantError("Fujita invariant failed its membership check")
    return a


def b_invariant(ap: AdelicPicard, L: DivisorClass, a) -> int:
    """Codimension of the minimal face of Eff containing K + aL."""
    eff = _check_cone(ap)
    x = _adjoint_vector(ap, L, Fraction(a))
    if not eff.contains(x):
        raise InvariantError("K + aL is not effective")
    return minimal_face_containing(eff, x).codim


@dataclass(frozen=True)
class AdjointData:
    a: Fraction
    adjoint: tuple[Fraction, ...]
    minimal_face: ConeData
    b: int
    d_adj: frozenset[int]
    a_v_adj: dict
    e: frozenset[int]
    b_v: dict
    rigid: bool
    decomposition_polytope_dim: int


def _solution_polytope_dim(vectors: Sequence[Sequence[int]], target: Sequence[Fraction]) -> int:
    """Dimension of {c >= 0 : sum c_i v_i = target}; -1 if empty.

    Homogenize to the cone {(c, t) >= 0 : sum c_i v_i - t target = 0}; the
    polytope is its slice t = 1.
    """
    den = math.lcm(*(Fraction(x).denominator for x in target)) if target else 1
    tgt = [int(Fraction(x) * den) for x in target]
    k = len(vectors)
    n = k + 1
    ineq = [[int(i == j) for j in range(n)] for i in range(n)]
    for row in range(len(tgt)):
        eq = [vectors[i][row] for i in range(k)] + [-tgt[row]]
        ineq.append(eq)
        ineq.append([-x for x in eq])
    lines, rays = double_description(ineq, n)
    if lines:
        raise InvariantError("solution cone contains a line")
    if not any(r[-1] > 0 for r in rays):
        return -1
    return rank(rays) - 1


def adjoint_decomposition(f: Fan, boundary_rays: Iterable[int], spec: AdelicFaceSpec,
                          L: DivisorClass | Sequence[int], a=None) -> AdjointData:
    """Split the generators into those with class in the adjoint face and the rest.

    Rigidity asks whether K + aL is a unique nonnegative combination of the
    classes of the U-divisors and the per-place face divisors.
    """
    ap = adelic_picard(f, boundary_rays, spec)
    if not isinstance(L, DivisorClass):
        L = ap.from_rays(L)
    if a is None:
        a = fujita_a(ap, L)
    a = Fraction(a)
    eff = _check_cone(ap)
    x = _adjoint_vector(ap, L, a)
    if not eff.contains(x):
        raise InvariantError("inconsistent: K + aL is not effective")
    face = minimal_face_containing(eff, x)
    tight = [h for h in eff.inequalities if dot(h, x) == 0]

    def in_face(v):
        return all(dot(h, v) == 0 for h in tight)

    u_rays = [i for i in range(f.n_rays) if i not in ap.boundary]
    d_adj = frozenset(i for i in u_rays if in_face(ap.ray_class(i).free))
    e = frozenset(u_rays) - d_adj
    a_v_adj, b_v = {}, {}
    place_gens = []
    for g in ap.generators[f.n_rays:]:
        place, ray = g.label.rsplit(":", 1)
        cls = ap.class_of(g.coords).free
        place_gens.append(cls)
        bucket = a_v_adj if in_face(cls) else b_v
        bucket.setdefault(place, set()).add(int(ray))
    for e_ in spec.entries:
        a_v_adj.setdefault(e_.place, set())
        b_v.setdefault(e_.place, set())
    vectors = [ap.ray_class(i).free for i in u_rays] + place_gens
    pdim = _solution_polytope_dim(vectors, x)
    if pdim < 0:
        raise InvariantError("inconsistent: no nonnegative decomposition of K + aL")
    return AdjointData(
        a, tuple(x), face.cone, face.codim, d_adj,
        {k: frozenset(v) for k, v in a_v_adj.items()}, e,
        {k: frozenset(v) for k, v in b_v.items()}, pdim == 0, pdim,
    )


@dataclass(frozen=True)
class GrowthPrediction:
    obstructed: bool
    witness: tuple[int, ...] | None
    a: Fraction | None
    b: int | None
    rigid: bool | None
    c_A: ArchimedeanConstant
    rank: int
    adjoint: tuple[Fraction, ...] | None = None


def predict_growth(f: Fan, boundary_rays: Iterable[int], spec: AdelicFaceSpec,
                   L: Sequence[int] | None = None) -> GrowthPrediction:
    """Predicted order T^a (log T)^(b-1) near a face, or the obstruction.

    ``L`` is a ray-coefficient vector on the compactification; the default
    is the log-anticanonical class.
    """
    boundary_rays = frozenset(boundary_rays)
    obs = analytic_obstruction(f, boundary_rays, spec)
    ap = adelic_picard(f, boundary_rays, spec)
    c_A = archimedean_constant(spec)
    if obs.obstructed:
        return GrowthPrediction(True, obs.witness, None, None, None, c_A, ap.free_rank)
    cls = ap.anticanonical if L is None else ap.from_rays(L)
    adj = adjoint_decomposition(f, boundary_rays, spec, cls)
    return GrowthPrediction(False, None, adj.a, adj.b, adj.rigid, c_A, ap.free_rank, adj.adjoint)
