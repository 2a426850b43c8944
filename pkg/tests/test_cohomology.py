import pytest
from hypothesis import given, settings, strategies as st

from toricpoints.cohomology import (
    CohomologyError, FiniteGroup, cyclic_group, direct_product, group_h1, permutation_module,
    small_groups,
)


def test_small_groups_catalogue():
    groups = small_groups(8)
    assert len(groups) == 14
    assert {g.order for g in groups.values()} <= set(range(1, 9))
    counts = {"D4": 10, "Q8": 6, "S3": 6}
    for name, n in counts.items():
        assert len(groups[name].subgroups()) == n
    c2_cubed = direct_product(direct_product(cyclic_group(2), cyclic_group(2)), cyclic_group(2))
    assert len(c2_cubed.subgroups()) == 16


@pytest.mark.parametrize("name", sorted(small_groups(8)))
def test_shapiro(name):
    g = small_groups(8)[name]
    for h in g.subgroups():
        gens, mats = permutation_module(g, h)
        assert group_h1(g, gens, mats) == []


def test_sign_module():
    assert group_h1(cyclic_group(2), [1], [[[-1]]]) == [2]


def test_c2_swap_is_zero():
    assert group_h1(cyclic_group(2), [1], [[[0, 1], [1, 0]]]) == []


def test_trivial_group():
    assert group_h1(cyclic_group(1), [0], [[[1, 0], [0, 1]]]) == []


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 8))
def test_sign_module_on_cyclic(n):
    # generator acts by -1: a homomorphism only for even n, where H^1 = Z/2
    g = cyclic_group(n)
    if n % 2:
        with pytest.raises(CohomologyError):
            group_h1(g, [1], [[[-1]]])
    else:
        assert group_h1(g, [1], [[[-1]]]) == [2]


def test_free_part_rejected():
    # trivial action on Z: H^1 = Hom(G, Z) = 0 for finite G, no error
    assert group_h1(cyclic_group(3), [1], [[[1]]]) == []


def test_not_a_group():
    with pytest.raises(CohomologyError):
        FiniteGroup(((0, 1), (0, 1)))
