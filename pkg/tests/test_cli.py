import csv
import io
import json
import subprocess
import sys

import pytest

from ramify.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_genseq_text(capsys):
    code, out, _ = run(capsys, "genseq", "e1")
    assert code == 0
    assert "v^2 - 2*u^2" in out and "z^2 - 2" in out


def test_eval_csv_is_parsable(capsys):
    code, out, _ = run(capsys, "eval", "e1", "v^2-2*u^2", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["section", "key", "value"]
    got = {(r[0], r[1]): r[2] for r in rows[1:]}
    assert got[("result", "value")] == "5"
    assert got[("result", "flag")] == "EXACT"


def test_json_report(capsys):
    code, out, _ = run(capsys, "verify", "theorem2", "e1_ext", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["results"]["stability"] == "yes"
    rows = data["tables"]["hilbert identity"]
    assert all(r["ok"] == "yes" for r in rows)


@pytest.mark.parametrize("argv,code", [
    (["verify", "theorem2", "e1_ext"], 0),
    (["verify", "corollary", "cusp_ext"], 0),
    (["verify", "prop1", "prop1_lex_diag", "--bound", "6,6"], 0),
    (["verify", "stability", "nonstable"], 1),
    (["verify", "theorem2", "nonstable"], 3),
    (["eval", "e1", "0"], 2),
    (["eval", "e1", "w+u"], 2),
    (["genseq", "no_such_spec"], 2),
    (["eval", "e1", "u^40*v", "--max-degree", "5"], 3),
    (["check", "e1", "--samples", "5", "--seed", "3"], 0),
    (["transform", "e1_ext", "--steps", "2"], 0),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_reducible_spec_is_an_input_error(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"beta0": "1", "beta1": "1",
                             "steps": [{"minpoly": "z^2-1", "beta_next": "5"}]}))
    code, _, err = run(capsys, "genseq", str(p))
    assert code == 2 and "reducible minimal polynomial at step 1" in err


def test_transform_zero_steps_echoes_input(capsys):
    _, a, _ = run(capsys, "transform", "e1", "--steps", "0")
    assert "v^2 - 2*u^2" in a


def test_output_is_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "ramify", "check", "cusp", "--samples", "20", "--seed", "5",
           "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
