import pytest

from toricpoints import gallery
from toricpoints.fan import FanError, attach_action, is_complete, is_smooth, load_fan, subfan

P2 = {"lattice_rank": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2], [2, 0]]}


def test_load_p2_counts_faces():
    f = load_fan(P2)
    assert len(f.cones) == 7
    assert frozenset() in f.cones


def test_load_a2():
    f = gallery.fan("a2")
    assert len(f.cones) == 4


@pytest.mark.parametrize("doc, message", [
    ({**P2, "rays": [[2, 0], [0, 1], [-1, -1]]}, "not primitive"),
    ({**P2, "max_cones": [[0, 1], [1, 5]]}, "[1, 5]"),
    ({**P2, "rays": [[1, 0], [0, 1], [1, 0]]}, "duplicate"),
    ({"lattice_rank": 2, "rays": [[1, 0], [1, 1], [0, 1]], "max_cones": [[0, 2], [1]]}, "intersect"),
    ({"lattice_rank": 2, "rays": [[1, 0]]}, "missing"),
])
def test_validation_errors(doc, message):
    with pytest.raises(FanError, match=message.replace("[", r"\[").replace("]", r"\]")):
        load_fan(doc)


def test_malformed_json():
    with pytest.raises(FanError, match="malformed"):
        load_fan("{not json")


def test_smooth_and_complete():
    assert is_smooth(load_fan(P2)) and is_complete(load_fan(P2))
    assert not is_smooth(gallery.fan("quadric_cone"))
    rays_only = load_fan({"lattice_rank": 2, "rays": [[1, 0], [0, 1]], "max_cones": [[0], [1]]})
    assert is_smooth(rays_only)
    assert not is_complete(gallery.fan("a2"))
    assert is_complete(gallery.fan("p1"))


def test_complete_smooth_rank_two_fixtures_are_cyclic():
    for name in gallery.FANS:
        f = gallery.fan(name)
        if f.lattice_rank == 2 and is_complete(f) and is_smooth(f):
            assert len(f.max_cones) == f.n_rays


def test_subfan():
    f = load_fan(P2)
    assert subfan(f, [0, 1]).rays == ((1, 0), (0, 1))
    assert len(subfan(f, [0, 1]).max_cones) == 1
    bl = gallery.fan("bl2p2")
    u = subfan(bl, [0, 1])
    assert u.rays == ((1, 0), (0, 1)) and len(u.cones) == 4
    assert subfan(f, []).cones == frozenset({frozenset()})
    full = subfan(bl, range(5))
    assert full.rays == bl.rays and set(full.max_cones) == set(bl.max_cones)


def test_actions():
    f = gallery.fan("p1xp1")
    act = attach_action(f, [[2, 3, 0, 1]])
    assert act.order == 2
    assert sorted(sorted(o) for o in act.ray_orbits) == [[0, 2], [1, 3]]
    assert attach_action(f, [[1, 0, 3, 2]]).order == 2
    ident = attach_action(f, [[0, 1, 2, 3]])
    assert ident.order == 1
    assert set(ident.fixed_cones()) == set(f.cones)


def test_action_orbits_partition_rays():
    f = gallery.fan("bl2p2")
    act = attach_action(f, [[1, 0, 4, 3, 2]])
    orbits = act.ray_orbits
    assert sorted(i for o in orbits for i in o) == list(range(5))


def test_action_rejects_non_automorphism():
    # swapping the two exceptional rays alone does not preserve the cones
    with pytest.raises(FanError):
        attach_action(gallery.fan("bl2p2"), [[0, 1, 4, 3, 2]])
    # a transposition of two rays of P2 preserves the combinatorics, and is induced by (x, y) -> (y, x)
    assert attach_action(load_fan(P2), [[1, 0, 2]]).order == 2


def test_document_round_trip():
    f = gallery.fan("bl2p2")
    assert load_fan(f.to_document()) == f
