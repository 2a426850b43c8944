import json

import pytest

from toricpoints.cli import main
from toricpoints.counter.records import CountRecord, write_csv


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_validate(capsys):
    code, out = run(capsys, "validate", "bl2p2")
    assert code == 0 and "True" in out.out


def test_validate_bad_fan(capsys, tmp_path):
    bad = tmp_path / "f.json"
    bad.write_text(json.dumps({"lattice_rank": 2, "rays": [[2, 0]], "max_cones": [[0]]}))
    code, out = run(capsys, "validate", str(bad))
    assert code == 1 and "primitive" in out.err


def test_predict_json(capsys, tmp_path):
    path = tmp_path / "p.json"
    code, out = run(capsys, "predict", "--fan", "bl2p2", "--out", str(path))
    assert code == 0 and "T^1 (log T)^1" in out.out
    rows = {r["face"]: r for r in json.loads(path.read_text())}
    assert rows["inf={E_x}"]["obstructed"] and rows["inf={E_x}"]["witness"] == [1, 0]
    assert (rows["inf={E_x,D}"]["a"], rows["inf={E_x,D}"]["b"]) == ("1", 2)


def test_clemens(capsys):
    code, out = run(capsys, "clemens", "--fan", "bl2p2")
    assert code == 0 and "E_x" in out.out


def test_xfun(capsys):
    code, out = run(capsys, "xfun", "--fan", "bl2p2", "--face", "inf=2,3")
    assert code == 0 and "1/2" in out.out


def test_density_and_euler(capsys):
    code, out = run(capsys, "density", "--fan", "p1", "--primes", "3")
    assert code == 0 and "5/4" in out.out
    code, out = run(capsys, "euler", "--fan", "p2", "--primes", "50")
    assert code == 0 and "normalized" in out.out


def test_count_csv(capsys):
    code, out = run(capsys, "count", "--fan", "bl2p2", "--tmax", "100", "--schedule", "10,100")
    assert code == 0
    assert out.out.splitlines()[1:] and out.out.splitlines()[1].startswith("bl2p2,all,10,108,")


def test_count_model_region(capsys):
    code, out = run(capsys, "count", "--model", "quadric_model", "--schedule", "1,10", "--region", "le")
    assert code == 0 and ",le,10," in out.out


def test_fit_verdicts(capsys, tmp_path):
    path = tmp_path / "c.csv"
    write_csv([CountRecord("m", "all", t, 3 * t) for t in (10, 100, 1000, 10**4, 10**5, 10**6)], path)
    code, out = run(capsys, "fit", str(path), "--expect", "1,1")
    assert code == 0 and "PASS" in out.out
    code, out = run(capsys, "fit", str(path), "--expect", "1,2")
    assert code == 3 and "FAIL" in out.out


@pytest.mark.parametrize("argv, code", [
    (["validate", "--fan", "no_such_fixture"], 1),
    (["predict", "--fan", "bl2p2", "--face", "inf=0"], 1),
    (["predict"], 1),
    (["count", "--fan", "bl2p2", "--schedule", "10,5"], 1),
    (["xfun", "--fan", "bl2p2", "--face", "inf=2,3", "--class", "0,0,0,0,0"], 2),
    (["count", "--fan", "quadric_cone_compact", "--tmax", "100"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_unknown_command(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 1


def test_verify_one(capsys):
    code, out = run(capsys, "verify", "--criteria", "4")
    assert code == 0 and "[PASS] criterion  4" in out.out
