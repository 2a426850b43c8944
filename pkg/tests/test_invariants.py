from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toricpoints import gallery
from toricpoints.clemens import AdelicFaceSpec, adelic_picard, clemens_complex
from toricpoints.invariants import (
    InvariantError, adjoint_decomposition, b_invariant, fujita_a, predict_growth,
)

PP = gallery.fan("p1xp1")
BL = gallery.fan("bl2p2")
B = frozenset({2, 3, 4})
NONE = frozenset()


def test_fujita_examples():
    ap = adelic_picard(PP, NONE, AdelicFaceSpec())
    assert fujita_a(ap, ap.anticanonical) == 1
    assert fujita_a(ap, ap.from_rays([2, 0, 1, 0])) == 2
    bl = adelic_picard(BL, B, AdelicFaceSpec.single({2, 3}))
    assert fujita_a(bl, bl.anticanonical) == 1


def test_b_examples():
    bl = adelic_picard(BL, B, AdelicFaceSpec.single({2, 3}))
    assert b_invariant(bl, bl.anticanonical, 1) == 2
    d = adelic_picard(BL, B, AdelicFaceSpec.single({3}))
    assert b_invariant(d, d.anticanonical, 1) == 1
    ap = adelic_picard(PP, NONE, AdelicFaceSpec())
    assert b_invariant(ap, ap.from_rays([2, 0, 1, 0]), 2) == 1


def test_adjoint_decompositions():
    adj = adjoint_decomposition(PP, NONE, AdelicFaceSpec(), adelic_picard(PP, NONE, AdelicFaceSpec()).from_rays([2, 0, 1, 0]))
    assert not adj.rigid and adj.decomposition_polytope_dim == 1
    spec = AdelicFaceSpec.single({2, 3})
    ap = adelic_picard(BL, B, spec)
    adj = adjoint_decomposition(BL, B, spec, ap.anticanonical)
    assert adj.rigid and all(x == 0 for x in adj.adjoint)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 6))
def test_scaling(u, v, k):
    ap = adelic_picard(PP, NONE, AdelicFaceSpec())
    L = ap.from_rays([u, 0, v, 0])
    kL = ap.from_rays([k * u, 0, k * v, 0])
    assert fujita_a(ap, kL) == fujita_a(ap, L) / k


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4))
def test_adjoint_reassembles(u, v):
    ap = adelic_picard(PP, NONE, AdelicFaceSpec())
    L = ap.from_rays([u, 0, v, 0])
    adj = adjoint_decomposition(PP, NONE, AdelicFaceSpec(), L)
    a = fujita_a(ap, L)
    want = tuple(k + a * l for k, l in zip(ap.canonical.free, L.free))
    assert adj.adjoint == want
    assert 1 <= adj.b <= ap.free_rank
    assert adj.b == b_invariant(ap, L, a)


def test_minus_k_gives_rank():
    for name in gallery.FANS:
        f = gallery.fan(name)
        b = frozenset(gallery.document(name).get("boundary_rays", []))
        try:
            faces = clemens_complex(f, b)
        except Exception:
            continue
        for face in faces:
            spec = AdelicFaceSpec.single(face.rays)
            try:
                pr = predict_growth(f, b, spec)
            except (InvariantError, ValueError):
                continue
            if not pr.obstructed and pr.rank > 0:
                assert pr.a == 1 and pr.b == pr.rank, (name, face)


def test_predict_examples():
    pr = predict_growth(BL, B, AdelicFaceSpec.single({2, 3}))
    assert (pr.a, pr.b, pr.obstructed) == (1, 2, False)
    assert predict_growth(BL, B, AdelicFaceSpec.single({2})).obstructed
    p1 = predict_growth(gallery.fan("p1"), {1}, AdelicFaceSpec.single({1}), L=[1, 0])
    assert (p1.a, p1.b) == (1, 1)


def test_non_big_class_rejected():
    ap = adelic_picard(PP, NONE, AdelicFaceSpec())
    with pytest.raises(InvariantError):
        fujita_a(ap, ap.from_rays([1, 0, 0, 0]))
