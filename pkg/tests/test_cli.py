import json
import os
import subprocess
import sys

import pytest

from feq.cli import main
from feq.serialize import report_from_json, solution_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_characters_of_s3(capsys):
    code, out, _ = run(capsys, "characters", "--carrier", "S3")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 2 and len(doc["characters"]) == 2


def test_construct_verify_classify(capsys, tmp_path):
    sol = tmp_path / "sol.json"
    code, out, _ = run(capsys, "construct", "--equation", "E2", "--branch", "3", "--carrier", "C6",
                       "--params", '{"a":"2","b":"1","c":"0"}', "--out", str(sol))
    assert code == 0
    ctx, tup = solution_from_json(json.loads(out))
    assert ctx.equation == "E2"
    code, out, _ = run(capsys, "verify", "--equation", "E2", "--solution", str(sol))
    assert code == 0 and json.loads(out)["verdict"] == "pass"
    report_from_json(json.loads(out), "C6")
    code, out, _ = run(capsys, "classify", "--solution", str(sol))
    doc = json.loads(out)
    assert code == 0 and doc["key"] == "E2-B3" and doc["params"] == {"a": "2", "b": "1", "c": "0"}


def test_verify_a_motivating_fixture(capsys, tmp_path):
    code, _, _ = run(capsys, "fixtures", "--filter", "sine addition from E1", "--export", str(tmp_path))
    assert code == 0
    (path,) = list(tmp_path.iterdir())
    code, out, _ = run(capsys, "verify", "--equation", "E1", "--solution", str(path))
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_exit_codes(capsys, tmp_path):
    code, out, err = run(capsys, "construct", "--equation", "E2", "--branch", "3", "--carrier", "C6",
                         "--params", '{"a":"1","b":"1","c":"0"}')
    assert code == 2 and out == "" and "a≠b" in err
    sol = tmp_path / "s.json"
    run(capsys, "construct", "--equation", "E2", "--branch", "3", "--carrier", "C6",
        "--params", '{"a":"2","b":"1","c":"0"}', "--out", str(sol))
    code, out, err = run(capsys, "classify", "--solution", str(sol), "--backend", "float")
    assert code == 2 and out == ""
    code, out, _ = run(capsys, "verify", "--solution", str(sol), "--backend", "float")
    assert code == 0 and json.loads(out)["backend"] == "float"
    doc = json.loads(sol.read_text())
    doc["unknowns"]["h"] = {"repr": "table", "values": {"0": "1"}, "default": "0"}
    sol.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--solution", str(sol))
    assert code == 1 and json.loads(out)["verdict"] == "fail"
    code, out, _ = run(capsys, "classify", "--solution", str(sol))
    assert code == 1 and json.loads(out)["status"] == "not_a_solution"
    with pytest.raises(SystemExit) as info:
        main(["verify", "--solution", str(sol), "--bogus"])
    assert info.value.code == 2
    code, _, _ = run(capsys, "verify", "--equation", "E9", "--solution", str(sol))
    assert code == 2


def test_fixture_tampering_reports_witness(capsys, tmp_path):
    assert run(capsys, "fixtures", "--export", str(tmp_path))[0] == 0
    code, out, _ = run(capsys, "fixtures", "--from", str(tmp_path))
    assert code == 0 and json.loads(out)["failed"] == 0
    target = next(p for p in tmp_path.iterdir() if "e7_motivating" in p.name)
    doc = json.loads(target.read_text())
    doc["unknowns"]["h"] = {"repr": "lincomb", "terms": [["1", doc["unknowns"]["h"]],
                                                         ["1", {"repr": "table", "values": {"0": "5"}, "default": "0"}]]}
    target.write_text(json.dumps(doc))
    code, out, err = run(capsys, "fixtures", "--from", str(tmp_path))
    rep = json.loads(out)
    assert code == 1 and rep["failed"] == 1
    row = next(r for r in rep["fixtures"] if r["verdict"] == "fail")
    assert row["witness"]["residual"] != "0" and "FAIL" in err


def test_empty_filter_runs_everything(capsys):
    code, out, _ = run(capsys, "fixtures", "--filter", "")
    full = json.loads(out)
    code2, out2, _ = run(capsys, "fixtures")
    assert code == code2 == 0 and full["passed"] == json.loads(out2)["passed"]


def test_sweep_and_groups(capsys):
    code, out, _ = run(capsys, "sweep", "--equation", "E8", "--carrier", "Z^1", "--samples", "6",
                       "--unstructured", "2", "--seed", "3")
    doc = json.loads(out)
    assert code == 0 and doc["clean"] and doc["samples"] == 8
    code, out, _ = run(capsys, "groups", "--carrier", "A5")
    entry = json.loads(out)["carriers"][0]
    assert entry["abelianization"] == [] and entry["characters"] == 1
    code, out, _ = run(capsys, "branches", "--equation", "E7")
    assert len(json.loads(out)["branches"]) == 5


def test_identical_requests_give_identical_bytes(capsys):
    argv = ["sweep", "--equation", "E2", "--carrier", "C6", "--samples", "5", "--unstructured", "2", "--seed", "9"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_environment_radius(capsys, monkeypatch):
    monkeypatch.setenv("FEQ_DEFAULT_RADIUS", "2")
    code, out, _ = run(capsys, "construct", "--equation", "E8", "--branch", "3", "--carrier", "Z^1",
                       "--params", '{"a":"0","b":"1","alpha":"1"}')
    assert code == 0 and json.loads(out)["radius"] == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "feq.cli", "characters", "--carrier", "C2xC2"],
                          capture_output=True, text=True, env={**os.environ})
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 4
