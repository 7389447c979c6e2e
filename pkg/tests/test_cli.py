import json

import pytest

from chab2.cli import _value_positions, main
from chab2.problem import load_problem


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_zset_prints_the_three_classes(capsys):
    code, out, _ = run(capsys, "zset", "--l", "7")
    assert code == 0
    assert json.loads(out)["classes"] == ["000000010", "000001000", "000001100"]


def test_certify_and_verify_roundtrip(capsys, tmp_path):
    cert = tmp_path / "gfe7.cert.json"
    code, _, _ = run(capsys, "certify", "gfe7", "--out", str(cert))
    assert code == 0
    doc = json.loads(cert.read_text())
    assert doc["verdict"]["points"] == ["inf", ["1", "1"], ["1", "-1"]]
    code, out, _ = run(capsys, "verify", "gfe7", str(cert))
    assert code == 0 and json.loads(out)["ok"]


def test_certify_fail_exit_code(capsys, tmp_path):
    doc = load_problem("flt5")
    doc["known_points"] = ["inf", ["0", "1"]]
    path = tmp_path / "p.json"
    path.write_text(json.dumps(doc, indent=1))
    code, out, _ = run(capsys, "certify", str(path))
    assert code == 10
    assert json.loads(out)["verdict"]["kind"] == "FAIL"


def test_schema_violation_reports_line(capsys, tmp_path):
    doc = load_problem("flt5")
    doc["curve"]["f"][1] = 7
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc, indent=1))
    code, _, err = run(capsys, "certify", str(path))
    assert code == 2
    # "curve" is on line 2, "f" opens on line 3, so f[1] sits on line 5
    assert err.startswith("%s:5:4: 7 is not of type 'string'" % path)


def test_syntax_error_reports_line(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n "schema": "chab2.problem/1",\n "curve": {"f": ["1",]}\n}\n')
    code, _, err = run(capsys, "certify", str(path))
    assert code == 2
    assert err.startswith("%s:3:22:" % path)


def test_missing_problem_and_fixture(capsys):
    assert run(capsys, "certify", "no-such-problem")[0] == 2
    code, _, err = run(capsys, "flt", "--p", "11")
    assert code == 2 and "flt_p11_units.json" in err


def test_flt_and_gfe_exit_codes(capsys):
    assert run(capsys, "flt", "--p", "1093")[0] == 10
    code, out, _ = run(capsys, "gfe", "--p", "7")
    assert code == 0 and json.loads(out)["verdict"] == "HOLDS"


def test_env_fixture_directory(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("CHAB_FIXTURES", str(tmp_path))
    code, _, err = run(capsys, "flt", "--p", "5")
    assert code == 2 and str(tmp_path) in err


def test_point_commands(capsys):
    code, out, _ = run(capsys, "mu", "flt5", "--point", "0,1")
    assert code == 0 and json.loads(out)["class"] == "0000000"
    code, out, _ = run(capsys, "halve", "flt5", "--point", "0,1", "--base", "0,-1")
    assert code == 0 and json.loads(out)["count"] == 1
    code, out, _ = run(capsys, "qdisk", "flt5", "--disk", "inf")
    res = json.loads(out)
    assert code == 0 and res["mode"] == "centered" and res["classes"] == ["0000000", "0000010"]
    assert run(capsys, "mu", "flt5", "--point", "2,1")[0] == 2
    assert run(capsys, "qdisk", "flt5", "--disk", "(1,1)")[0] == 2


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", "--q", "7", "--genus", "2", "--trials", "20")
    assert code == 0 and json.loads(out)["mismatches"] == []


def test_flag_ranges(capsys):
    assert run(capsys, "certify", "flt5", "--threads", "0")[0] == 2
    assert run(capsys, "zset", "--l", "5", "--precision", "4")[0] == 2
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_value_positions():
    text = '{"a": [1, {"b": "x"}],\n "c": null}'
    pos = _value_positions(text)
    assert text[pos[("a", 1, "b")]] == '"'
    assert text[pos[("c",)]:].startswith("null")
