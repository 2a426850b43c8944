import pytest

from toricpoints.counter.records import CountRecord, default_schedule, read_csv, write_csv


def test_round_trip(tmp_path):
    recs = [CountRecord("m", "all", 10, 40, 1.5), CountRecord("m", "le", 20, 88, 0.0)]
    path = tmp_path / "c.csv"
    text = write_csv(recs, path)
    assert text.splitlines()[0] == "model_id,region_id,T,N,millis"
    assert read_csv(path) == recs


def test_missing_column(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("model_id,T,N\nm,1,2\n")
    with pytest.raises(ValueError, match="region_id"):
        read_csv(path)


def test_schedule():
    s = default_schedule(10**6)
    assert s[0] == 1000 and s[-1] == 10**6
    assert all(b == 2 * a for a, b in zip(s[:-2], s[1:-1]))
    assert default_schedule(1500) == [1000, 1500]
    assert default_schedule(4000) == [1000, 2000, 4000]
