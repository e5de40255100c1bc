import json
import os
import subprocess
import sys

import pytest

from shiftcodes.cli import main, run


def doc(argv):
    status, text = run(argv)
    return status, json.loads(text)


def test_analyze_golden_mean():
    status, d = doc(["analyze", "golden-mean"])
    assert status == 0 and d["schema_version"] == 1
    r = d["result"]
    assert abs(r["entropy"][0] - 0.481212) < 1e-6
    assert r["classify"]["mixing"] and r["periodic"]["per"] == 1


def test_analyze_matrix_file(tmp_path):
    f = tmp_path / "x.json"
    f.write_text(json.dumps({"matrix": [[0, 2], [2, 0]]}))
    status, d = doc(["analyze", str(f)])
    per = d["result"]["periodic"]
    assert status == 0 and per["per"] == 2
    assert per["p"]["1"] == 0 and per["p"]["2"] == 8


def test_empty_document_is_a_parse_error(tmp_path):
    f = tmp_path / "empty.json"
    f.write_text("")
    status, d = doc(["analyze", str(f)])
    assert status == 1 and d["error"]["type"] == "ParseError"


def test_unknown_builtin():
    status, d = doc(["verify", "nothing-here", "--property", "open"])
    assert status == 1 and d["error"]["type"] == "ParseError"


def test_verify_even_cover():
    status, d = doc(["verify", "even-cover", "--property", "open", "--property", "bict"])
    assert status == 0
    assert [r["verdict"] for r in d["reports"]] == ["no", "no"]
    assert all(r["witness"] for r in d["reports"])


def test_verify_bounded_is_exit_two():
    status, d = doc(["verify", "yoo", "--property", "left-retract", "--n", "0"])
    assert status == 2 and d["reports"][0]["verdict"] == "unknown-bounded"


def test_gallery_and_sgap_status():
    assert run(["gallery", "evencover"])[0] == 0
    assert run(["gallery", "nope"])[0] == 1
    assert run(["sgap", "--members", "1,2"])[0] == 0
    status, d = doc(["sgap", "--rule", "odds"])
    assert status == 2 and d["result"]["result"]["gcd"] == 2


def test_construct_condition_failure():
    status, d = doc(["construct", "full:2", "cycle:ab"])
    assert status == 1 and d["error"]["type"] == "ConditionFailed"


def test_construct_periodic_example(tmp_path):
    f = tmp_path / "x.json"
    f.write_text(json.dumps({"matrix": [[0, 2], [2, 0]]}))
    status, d = doc(["construct", str(f), "cycle:ab"])
    assert status == 0
    assert {r["property"]: r["verdict"] for r in d["reports"]}["factor"] == "yes"


def test_bad_flag_values():
    with pytest.raises(SystemExit):
        run(["analyze", "golden-mean", "--tol", "-1"])


def test_output_is_deterministic():
    argv = ["verify", "even-cover", "--property", "open", "--seed", "3"]
    assert run(argv) == run(argv)


def test_out_is_written_atomically(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["analyze", "even", f"--out={out}"]) == 0
    assert json.loads(out.read_text())["command"] == "analyze"
    assert capsys.readouterr().out == ""
    assert os.listdir(tmp_path) == ["r.json"]


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "shiftcodes.cli", "gallery", "nope"],
                       capture_output=True, text=True)
    assert p.returncode == 1 and "UnknownGallery" in p.stderr
