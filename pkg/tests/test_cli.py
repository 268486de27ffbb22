"""CLI: exit codes, report stability, DIMACS export."""

import json

from homlkit.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_check_goedel_exits_zero(capsys):
    code, out = run_cli(["check", "--bundle", "goedel", "--scope", "2,2"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["results"][0]["verdict"] == "valid_up_to_scope"


def test_check_countermodel_exits_one(tmp_path, capsys):
    path = tmp_path / "t.homl"
    path.write_text("const p : prop\ngoal (box p) -> p\n")
    code, out = run_cli(["check", "--file", str(path), "--scope", "2,1"], capsys)
    assert code == 1
    report = json.loads(out)
    assert report["results"][0]["verdict"] == "countermodel"
    assert "model" in report["results"][0]


def test_parse_error_exits_two(tmp_path, capsys):
    path = tmp_path / "broken.homl"
    path.write_text("axiom box (\n")
    code, out = run_cli(["check", "--file", str(path)], capsys)
    assert code == 2
    report = json.loads(out)
    assert "broken.homl:1:" in report["error"]


def test_unknown_bundle_exits_two(capsys):
    code, out = run_cli(["check", "--bundle", "nonsense"], capsys)
    assert code == 2


def test_find_model_unsat_exits_one(tmp_path, capsys):
    path = tmp_path / "t.homl"
    path.write_text("const c : prop\naxiom c & not c\n")
    code, out = run_cli(["find-model", "--file", str(path), "--scope", "1,1"], capsys)
    assert code == 1
    assert json.loads(out)["result"]["verdict"] == "unsatisfiable"


def test_budget_exhaustion_exits_three(capsys):
    code, out = run_cli(["check", "--bundle", "goedel", "--scope", "2,2",
                         "--budget", "1"], capsys)
    assert code == 3
    report = json.loads(out)
    assert report["results"][0]["verdict"] == "indeterminate"


def test_reports_are_byte_identical(capsys):
    argvs = [
        ["check", "--bundle", "goedel", "--scope", "2,2"],
        ["find-model", "--bundle", "goedel", "--scope", "1,2"],
        ["count-positive", "--bundle", "goedel", "--entities", "2"],
        ["enumerate", "--bundle", "k", "--scope", "1,1", "--limit", "4"],
    ]
    for argv in argvs:
        _, first = run_cli(argv, capsys)
        _, second = run_cli(argv, capsys)
        assert first == second, argv


def test_count_positive_matches_manifest(capsys):
    code, out = run_cli(["count-positive", "--bundle", "goedel", "--entities", "3"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["minimum"] == 4
    assert report["expected_min"] == 4


def test_export_cnf_to_file(tmp_path, capsys):
    out_path = tmp_path / "problem.cnf"
    code, _ = run_cli(["export-cnf", "--bundle", "k", "--scope", "1,1",
                       "--out", str(out_path)], capsys)
    assert code == 0
    data = out_path.read_bytes()
    assert b"p cnf " in data
    assert data.endswith(b"0\n")


def test_export_cnf_refute_mode(capsys):
    code, out = run_cli(["export-cnf", "--bundle", "k", "--scope", "2,1",
                         "--mode", "refute", "--goal", "T"], capsys)
    assert code == 0
    assert "p cnf" in out


def test_church_suite_exits_zero(capsys):
    code, out = run_cli(["church-suite"], capsys)
    assert code == 0
    report = json.loads(out)
    assert all(entry["as_expected"] for entry in report["results"])


def test_text_format(capsys):
    code, out = run_cli(["check", "--bundle", "s5", "--scope", "2,1",
                         "--goal", "5", "--format", "text"], capsys)
    assert code == 0
    assert "valid_up_to_scope" in out


def test_frame_override(tmp_path, capsys):
    path = tmp_path / "t.homl"
    path.write_text("const p : prop\ngoal (box p) -> p\n")
    code, _ = run_cli(["check", "--file", str(path), "--scope", "2,1",
                       "--frame", "refl"], capsys)
    assert code == 0


def test_budget_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HOMLKIT_BUDGET", "1")
    code, out = run_cli(["check", "--bundle", "goedel", "--scope", "2,2"], capsys)
    assert code == 3
