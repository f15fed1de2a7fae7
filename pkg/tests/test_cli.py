import json
import subprocess
import sys

import pytest

from relrips.cli import main

GOLDEN_RUNS = {
    "parse_f2_rel_a.json": ["parse", "fixtures/f2_rel_a.grp"],
    "homology_c6_plain_s1_k1.json": ["homology", "--fixture", "c6.grp", "--plain", "--s", "1", "--k", "1"],
    "brown_c6_plain_k1.json": ["brown", "--fixture", "c6.grp", "--plain", "--k", "1", "--alpha-s", "1"],
    "bcp_z2_trend.json": ["bcp", "--fixture", "z2_rel_a.grp", "--R", "3", "4", "5", "--T", "2", "--d-max", "3"],
    "params_f2_rel_a.json": ["params", "--fixture", "f2_rel_a.grp", "--R", "6"],
    "pipeline_f2_rel_a.json": ["pipeline", "--fixture", "f2_rel_a.grp"],
    "pipeline_z2_rel_a.json": ["pipeline", "--fixture", "z2_rel_a.grp"],
    "pipeline_c6.json": ["pipeline", "--fixture", "c6.grp"],
}


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_golden_outputs(name, capsys, check_golden):
    code, out, err = run(GOLDEN_RUNS[name], capsys)
    assert code == 0, err
    check_golden(name, out)


def test_examples(capsys):
    code, out, _ = run(["homology", "--fixture", "c6.grp", "--plain", "--s", "1", "--k", "1"], capsys)
    assert code == 0 and json.loads(out)["betti"] == 1
    code, out, _ = run(["brown", "--fixture", "c6.grp", "--plain", "--k", "1", "--alpha-s", "1"], capsys)
    cert = json.loads(out)
    assert code == 0 and cert["beta"][2] == 2 and cert["status"] == "trivialized"


def test_every_subcommand_runs(capsys):
    for argv in (["ball", "--fixture", "f2", "--R", "2"],
                 ["ball", "--fixture", "f2_rel_a", "--R", "2", "--peripheral"],
                 ["ball", "--fixture", "f2", "--R", "1", "--edges"],
                 ["cone", "--fixture", "f2_rel_a", "--R", "3"],
                 ["delta", "--fixture", "f2_rel_a", "--R", "3", "4"],
                 ["delta", "--fixture", "z2", "--R", "3", "--cayley", "--sample", "500"],
                 ["rips", "--fixture", "f2_rel_a", "--R", "3", "--r", "1", "--d", "1", "--s", "2"],
                 ["rips", "--fixture", "c6", "--plain", "--s", "2", "--export"]):
        code, out, err = run(argv, capsys)
        assert code == 0, (argv, err)
        assert out


def test_formats(capsys):
    code, out, _ = run(["bcp", "--fixture", "z2_rel_a", "--R", "3", "4", "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("R,") and len(lines) == 3
    code, out, _ = run(["cone", "--fixture", "f2_rel_a", "--R", "2", "--format", "text"], capsys)
    assert code == 0 and "cosets: " in out


def test_out_dir(tmp_path, capsys):
    code, out, _ = run(["brown", "--fixture", "c6", "--plain", "--k", "1", "--alpha-s", "1",
                        "--out", str(tmp_path)], capsys)
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert any(n.startswith("certificate-") for n in names)
    assert any(n.startswith("evidence-") for n in names)
    assert "brown.json" in names


@pytest.mark.parametrize("argv,code", [
    (["bogus"], 2),
    (["homology", "--fixture", "c6", "--s", "1", "--k", "1"], 2),
    (["homology", "--fixture", "c6", "--plain", "--s", "1", "--k", "1", "--k-max", "1"], 2),
    (["homology", "--fixture", "missing.grp", "--plain", "--s", "1", "--k", "1"], 1),
    (["cone", "--fixture", "f2", "--R", "2"], 1),
    (["rips", "--fixture", "c6", "--plain", "--s", "-1"], 2),
])
def test_exit_codes(argv, code, capsys):
    got, out, err = run(argv, capsys)
    assert got == code
    assert out == ""
    assert "error" in json.loads(err)


def test_caps_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("RELRIPS_CAP_VERTICES", "10")
    code, _, err = run(["ball", "--fixture", "f2", "--R", "3"], capsys)
    assert code == 3 and json.loads(err)["error"] == "ResourceLimitError"
    monkeypatch.delenv("RELRIPS_CAP_VERTICES")
    monkeypatch.setenv("RELRIPS_CAP_CLIQUES", "10")
    code, _, _ = run(["rips", "--fixture", "c6", "--plain", "--s", "2"], capsys)
    assert code == 3


def test_syntax_error_json(tmp_path, capsys):
    bad = tmp_path / "bad.grp"
    bad.write_text("[group]\ngenerators a A\n", encoding="utf-8")
    code, _, err = run(["parse", str(bad)], capsys)
    payload = json.loads(err)
    assert code == 1 and payload["line"] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "relrips", "parse", "c6"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["valid"]
