"""The ten acceptance criteria, one test each, each printing a pass/fail line."""
import pytest

from toricpoints import acceptance


@pytest.mark.parametrize("number", sorted(acceptance.CRITERIA))
def test_criterion(number, capsys):
    res = acceptance.run(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail
