import math
from fractions import Fraction

import pytest
from scipy.optimize import linprog

from toricpoints import gallery
from toricpoints.clemens import (
    AdelicFaceSpec, ClemensError, ClemensFace, PlaceFace, adelic_picard, analytic_obstruction,
    archimedean_constant, clemens_complex, pic_u,
)
from toricpoints.polycore import ConeData, dual_cone

BL = gallery.fan("bl2p2")
B = frozenset({2, 3, 4})
E_X, D, E_Y = 2, 3, 4


def single(*rays):
    return AdelicFaceSpec.single(rays)


def test_complexes():
    faces = clemens_complex(BL, B)
    assert faces[0] == ClemensFace() and faces[0].dim == -1
    assert sorted(sorted(f.rays) for f in faces[1:]) == [[2], [2, 3], [3], [3, 4], [4]]
    p1 = clemens_complex(gallery.fan("p1"), {1})
    assert [f.dim for f in p1] == [-1, 0]
    assert clemens_complex(gallery.fan("quadric_cone"), set()) == [ClemensFace()]


def test_adelic_ranks():
    assert adelic_picard(BL, B, single(E_X, D)).free_rank == 2
    assert adelic_picard(BL, B, single(D)).free_rank == 1


def test_empty_face_is_pic_u():
    for name in ("p1", "p2", "bl2p2", "p1xp1", "quadric_cone_compact"):
        f = gallery.fan(name)
        b = frozenset(gallery.document(name)["boundary_rays"])
        ap = adelic_picard(f, b, AdelicFaceSpec())
        pu = pic_u(f, b)
        assert (ap.free_rank, ap.torsion) == (pu.free_rank, pu.torsion)


def test_obstructions():
    ex = analytic_obstruction(BL, B, single(E_X))
    assert ex.obstructed and ex.witness == (1, 0)
    ey = analytic_obstruction(BL, B, single(E_Y))
    assert ey.obstructed and ey.witness == (0, 1)
    assert not analytic_obstruction(BL, B, single(D)).obstructed
    assert not analytic_obstruction(gallery.fan("p1"), {1}, single(1)).obstructed


def test_witness_is_nonnegative_on_constraints():
    for face in clemens_complex(BL, B):
        rep = analytic_obstruction(BL, B, AdelicFaceSpec.single(face.rays))
        if rep.obstructed:
            for i in [0, 1, *face.rays]:
                assert sum(a * b for a, b in zip(rep.witness, BL.rays[i])) >= 0


def _pointed_by_lp(gens):
    # Eff is pointed iff no nonzero nonnegative combination sums to zero
    k = len(gens)
    if not gens:
        return True
    n = len(gens[0])
    A_eq = [[g[i] for g in gens] for i in range(n)] + [[1] * k]
    res = linprog([0] * k, A_eq=A_eq, b_eq=[0] * n + [1], bounds=[(0, None)] * k, method="highs")
    return res.status == 2


def test_unobstructed_means_pointed():
    for name in ("bl2p2", "p1xp1", "p1", "p2", "quadric_cone_compact"):
        f = gallery.fan(name)
        b = frozenset(gallery.document(name)["boundary_rays"])
        for face in clemens_complex(f, b):
            spec = AdelicFaceSpec.single(face.rays)
            ap = adelic_picard(f, b, spec)
            if ap.free_rank == 0 or analytic_obstruction(f, b, spec).obstructed:
                continue
            gens = [list(c.free) for c in ap.generator_classes() if any(c.free)]
            assert _pointed_by_lp(gens), (name, face)


def test_dual_cone_monotone_in_face():
    def constraint_dual(rays):
        return dual_cone(ConeData.from_vectors([BL.rays[i] for i in [0, 1, *rays]], 2))

    for small, big in (((2,), (2, 3)), ((3,), (3, 4)), ((), (3,))):
        big_dual = constraint_dual(big)
        small_dual = constraint_dual(small)
        assert all(small_dual.contains(g) for g in big_dual.generators)


def test_archimedean_constant():
    assert archimedean_constant(single(3)).value == 2
    cplx = AdelicFaceSpec((PlaceFace("w", "complex", ClemensFace(frozenset({3}))),))
    assert math.isclose(archimedean_constant(cplx).value, 2 * math.pi)
    assert archimedean_constant(AdelicFaceSpec()).value == 1


def test_two_places_share_a_divisor():
    spec = AdelicFaceSpec((PlaceFace("v1", "real", ClemensFace(frozenset({3}))),
                           PlaceFace("v2", "real", ClemensFace(frozenset({3})))))
    ap = adelic_picard(BL, B, spec)
    assert len(ap.generators) == BL.n_rays + 2


def test_invalid_faces():
    with pytest.raises(ClemensError):
        adelic_picard(BL, B, single(0))
    with pytest.raises(ClemensError):
        adelic_picard(BL, B, single(2, 4))
    with pytest.raises(ClemensError):
        adelic_picard(BL, B, AdelicFaceSpec((PlaceFace("v", "p-adic", ClemensFace(frozenset({3}))),)))
