from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toricpoints.polycore import (
    ConeData, NotPointedError, PolyhedralError, det, dual_cone, lattice_index, matmul,
    minimal_face_containing, simplicial_index, smith_normal_form, triangulate,
)

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_snf_examples():
    assert smith_normal_form([[1, 0], [0, 1]]).S == [[1, 0], [0, 1]]
    assert smith_normal_form([[2, 4], [6, 8]]).diagonal == [2, 4]
    assert smith_normal_form([[0, 0], [0, 0], [0, 0]]).S == [[0, 0], [0, 0], [0, 0]]


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_factorization(m):
    sf = smith_normal_form(m)
    assert matmul(matmul(sf.U, m), sf.V) == sf.S
    assert abs(det(sf.U)) == 1 and abs(det(sf.V)) == 1
    assert matmul(sf.U, sf.U_inv) == matmul(sf.U_inv, sf.U)
    d = [x for x in sf.diagonal if x]
    assert all(x > 0 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    for i, row in enumerate(sf.S):
        for j, x in enumerate(row):
            assert i == j or x == 0


def test_dual_cone_examples():
    orth = ConeData.from_vectors([[1, 0], [0, 1]])
    assert set(dual_cone(orth).generators) == {(1, 0), (0, 1)}
    ray = ConeData.from_vectors([[1, 0]], 2)
    assert set(dual_cone(ray).generators) == {(1, 0), (0, 1), (0, -1)}
    full = ConeData.from_vectors([[1, 0], [-1, 0], [0, 1], [0, -1]])
    assert dual_cone(full).generators == ()


def test_dual_generators_sorted_and_primitive():
    c = ConeData.from_vectors([[2, 1, 0], [0, 1, 0], [1, 1, 3]])
    gens = dual_cone(c).generators
    assert list(gens) == sorted(gens)
    assert all(lattice_index([g]) == 1 for g in gens)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=5))
def test_double_dual(vectors):
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return
    c = ConeData.from_vectors(vectors, 3)
    dd = dual_cone(dual_cone(c))
    for g in c.generators:
        assert dd.contains(g)
    for g in dd.generators:
        assert c.contains(g)


def test_minimal_face():
    orth = ConeData.from_vectors([[1, 0], [0, 1]])
    assert minimal_face_containing(orth, [1, 1]).codim == 0
    assert minimal_face_containing(orth, [0, 0]).codim == 2
    face = minimal_face_containing(orth, [1, 0])
    assert face.codim == 1 and face.cone.generators == ((1, 0),)
    assert minimal_face_containing(orth, [Fraction(1, 3), 0]).codim == 1
    with pytest.raises(PolyhedralError):
        minimal_face_containing(orth, [-1, 0])


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_minimal_face_interior_property(w):
    c = ConeData.from_vectors([[1, 0, 0], [1, 1, 0], [0, 1, 1], [0, 0, 1]])
    x = [sum(wi * g[i] for wi, g in zip(w + [1], c.generators)) for i in range(3)]
    face = minimal_face_containing(c, x)
    assert (face.codim == 0) == c.in_interior(x)


def test_triangulate_examples():
    simp = ConeData.from_vectors([[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    assert [set(t.generators) for t in triangulate(simp)] == [set(simp.generators)]
    square = ConeData.from_vectors([[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]])
    parts = triangulate(square)
    assert len(parts) == 2
    orth = ConeData.from_vectors([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert len(triangulate(orth)) == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=5, unique=True),
       st.randoms(use_true_random=False))
def test_index_sum_invariant_at_height_one(points, rnd):
    # generators on the hyperplane x_3 = 1: the index sum is the normalized area of the polygon
    c = ConeData.from_vectors([[a, b, 1] for a, b in points])
    if c.dim < 3:
        return
    n = len(c.generators)
    order = list(range(n))
    rnd.shuffle(order)
    s1 = sum(simplicial_index(t) for t in triangulate(c))
    s2 = sum(simplicial_index(t) for t in triangulate(c, order))
    assert s1 == s2


def test_not_pointed_is_typed():
    half = ConeData.from_vectors([[1, 0], [0, 1], [0, -1]])
    assert not half.pointed
    with pytest.raises(NotPointedError):
        triangulate(half)
