import numpy as np
import pytest
from hypothesis import given, strategies as st
from sklearn.base import clone

from toricpoints import gallery
from toricpoints.counter.heights import (
    HeightError, MonomialHeightTransformer, height_eval, height_spec, lift,
)

BL = gallery.fan("bl2p2")
nonzero = st.integers(-10**6, 10**6).filter(bool)


def test_p1_is_max():
    h = height_spec(gallery.fan("p1"), [1, 0])
    assert sorted(h.monomials) == [(0, 1), (1, 0)]
    assert height_eval(h, [-7, 3]) == 7


def test_blowup_monomials():
    h = height_spec(BL, [1, 1, 0, 0, 0])
    assert sorted(h.monomials) == [(0, 0, 1, 2, 1), (0, 1, 0, 1, 1), (1, 0, 1, 1, 0), (1, 1, 0, 0, 0)]


@given(nonzero, nonzero)
def test_blowup_height_on_torus(x, y):
    h = height_spec(BL, [1, 1, 0, 0, 0])
    assert height_eval(h, lift(h, [0, 1], [x, y])) == max(abs(x * y), 1)


def test_errors():
    with pytest.raises(HeightError, match="not nef"):
        height_spec(BL, [0, 0, 1, 0, 0])
    with pytest.raises(HeightError, match="complete"):
        height_spec(gallery.fan("a2"), [1, 1])
    with pytest.raises(HeightError):
        height_spec(BL, [1, 1])
    h = height_spec(gallery.fan("p1"), [1, 0])
    with pytest.raises(HeightError, match="height 0"):
        height_eval(h, [0, 0])


def test_transformer():
    t = MonomialHeightTransformer(fan=BL, lam=[1, 1, 0, 0, 0], u_rays=[0, 1])
    out = t.fit_transform(np.array([[2, 3], [-1, 1], [5, -4]]))
    assert list(out) == [6, 1, 20]
    assert clone(t).get_params()["lam"] == [1, 1, 0, 0, 0]
    with pytest.raises(HeightError):
        t.transform([[1, 2, 3]])
    with pytest.raises(HeightError):
        MonomialHeightTransformer().fit()
