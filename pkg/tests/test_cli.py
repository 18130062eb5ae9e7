import json
import subprocess
import sys

import pytest

from greencell.cli import main
from greencell.model import case_study, make_scenario
from greencell.scenario_io import case_study_path, emit_scenario


@pytest.fixture
def cs_file():
    return str(case_study_path())


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_validate_ok(cs_file, capsys):
    assert main(["validate", cs_file]) == 0
    assert "ok (2 BSs, 20 terminals)" in capsys.readouterr().out


def test_validate_reports_every_problem(tmp_path, capsys):
    doc = json.loads(emit_scenario(case_study()))
    doc["tariff"]["agg_sell"] = 0.6
    doc["noise_density"] = 0
    path = write(tmp_path, "bad.scenario", json.dumps(doc))
    assert main(["validate", path]) == 1
    err = capsys.readouterr().err
    assert "price ordering" in err and "noise_density" in err


def test_parse_errors_exit_1(tmp_path, capsys):
    assert main(["validate", write(tmp_path, "empty.scenario", "")]) == 1
    assert main(["compare", write(tmp_path, "junk.scenario", "{oops")]) == 1
    assert main(["run", str(tmp_path / "missing.scenario"), "--scheme", "comp"]) == 1
    assert "error:" in capsys.readouterr().err


def test_run_writes_record(cs_file, tmp_path, capsys):
    out = tmp_path / "rec.json"
    assert main(["run", cs_file, "--scheme", "comp", "--out", str(out)]) == 0
    assert "total cost:  1.25" in capsys.readouterr().out
    rec = json.loads(out.read_text())
    assert rec["scheme"] == "comp"
    assert rec["consumption"][1] == pytest.approx(3.75, abs=0.01)


def test_run_fixed_price_prints_note(cs_file, capsys):
    assert main(["run", cs_file, "--scheme", "joint-trading-comp", "--fixed-price"]) == 0
    out = capsys.readouterr().out
    assert "total cost:  0.46" in out and "note:" in out


def test_run_unsupported_exits_2(tmp_path, capsys):
    s = make_scenario(harvest=[1.0, 0.0, 0.0], bandwidth=[1.0] * 3, homes=[0, 1, 2])
    path = write(tmp_path, "three.scenario", emit_scenario(s))
    assert main(["run", path, "--scheme", "spectrum"]) == 2
    assert "infeasible" in capsys.readouterr().err


def test_run_infeasible_exits_2(tmp_path):
    s = make_scenario(harvest=[0.0, 0.0], bandwidth=[1.0, 1.0], homes=[0], gains=[[0.0], [0.0]])
    path = write(tmp_path, "dead.scenario", emit_scenario(s))
    assert main(["run", path, "--scheme", "comp"]) == 2


def test_compare_outputs(cs_file, tmp_path, capsys):
    csv_path, jsonl_path = tmp_path / "t.csv", tmp_path / "t.jsonl"
    assert main(["compare", cs_file, "--csv", str(csv_path), "--jsonl", str(jsonl_path)]) == 0
    out = capsys.readouterr().out
    for want in ("15.78", "10.51", "10.03", "11.54", "1.25", "7.60", "0.46", "0.10"):
        assert want in out
    assert len(jsonl_path.read_text().splitlines()) == 8
    assert csv_path.read_text().startswith("scheme,")
    assert main(["compare", cs_file, "--precision", "4"]) == 0
    assert "15.7843" in capsys.readouterr().out


def test_gen(tmp_path, capsys):
    out = tmp_path / "g.scenario"
    assert main(["gen", "--bs", "2", "--mts", "5,15", "--seed", "7", "--out", str(out)]) == 0
    assert main(["validate", str(out)]) == 0
    assert main(["gen", "--bs", "2", "--mts", "5,15", "--seed", "7"]) == 0
    assert capsys.readouterr().out.endswith(out.read_text())
    assert main(["gen", "--bs", "2", "--mts", "5", "--seed", "7"]) == 1
    assert main(["gen", "--bs", "2", "--mts", "a,b", "--seed", "7"]) == 1


def test_console_entry_point(cs_file):
    res = subprocess.run([sys.executable, "-m", "greencell.cli", "compare", cs_file],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "15.78" in res.stdout
