import json
import subprocess
import sys

import pytest

from stabnet import cli, spin


@pytest.fixture
def restore_spin(monkeypatch):
    # the fault hook patches a module attribute; undo it after the test
    monkeypatch.setattr(spin, "distance_table", spin.distance_table)


def test_verify_passes(capsys):
    assert cli.main(["verify", "--quiet"]) == 0
    assert "checks passed" in capsys.readouterr().err


def test_verify_fault_injection_fails(restore_spin, capsys):
    assert cli.main(["verify", "--quiet", "--inject-fault", "distance-table"]) == 1
    err = capsys.readouterr().err
    assert "first failing invariant: spin: distance table" in err


def test_rt_json_to_file(tmp_path):
    out = tmp_path / "rt.json"
    assert cli.main(["rt", "--graph", "bell", "--trials", "5", "--p", "3", "--N", "2",
                     "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert [r["gap"] for r in doc["rows"]] == [0, 0, 0]
    assert doc["config"]["p"] == 3


def test_region_flag_and_csv(capsys):
    assert cli.main(["rt", "--trials", "5", "--region", "AB=A,B", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("region,S_RT")
    assert lines[1].startswith("AB,1,")


def test_graph_file(tmp_path, capsys):
    g = {"vertices": ["x", "A", "B"], "boundary": ["A", "B"],
         "edges": [["A", "x"], ["x", "B"]], "p": 2, "N": 1}
    path = tmp_path / "g.json"
    path.write_text(json.dumps(g))
    assert cli.main(["rt", "--graph", str(path), "--trials", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["region"] for r in doc["rows"]] == ["A", "B"]
    assert [r["S_RT"] for r in doc["rows"]] == [1, 1]


def test_bad_inputs_exit_2(tmp_path, capsys):
    assert cli.main(["rt", "--graph", str(tmp_path / "missing.json"), "--trials", "1"]) == 2
    assert cli.main(["rt", "--region", "Q=nope", "--trials", "1"]) == 2
    assert "error:" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        cli.main(["rt", "--region", "noequals"])


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "stabnet", "ghz", "--trials", "3"],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["schema"] == 1
