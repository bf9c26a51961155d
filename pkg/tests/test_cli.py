from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from src.cli.main import main

REPO_ROOT = Path(__file__).resolve().parents[1]
EXAMPLE_1 = str(REPO_ROOT / "data" / "example1.csv")
EXAMPLE_2 = str(REPO_ROOT / "data" / "example2.csv")
SAMPLE_TRACE = str(REPO_ROOT / "data" / "sample_trace.csv")


def test_solve_prints_f1_allocation(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["solve", EXAMPLE_1, "f1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "mechanism: f1"
    assert "A3: 0.16,0.8" in out
    assert "exhausted: 2" in out


def test_solve_prints_drf_allocation(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["solve", EXAMPLE_1, "DRF"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[1].startswith("A1: 0.454545454545,0.181818181818")
    assert "social_welfare: 1.36363636364" in out
    assert "exhausted: 1" in out


def test_solve_json_record(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["solve", EXAMPLE_1, "hybrid-sw", "--json"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["mechanism"] == "hybrid-sw"
    assert record["branch"] == "f1"
    assert record["n"] == 3
    assert record["allocation"][2] == pytest.approx([0.16, 0.8])


def test_solve_reports_parse_errors(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    bad = tmp_path / "bad.csv"
    bad.write_text("r1,r2\n1,abc\n", encoding="utf-8")
    assert main(["solve", str(bad), "drf"]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["solve", str(tmp_path / "missing.csv"), "drf"]) == 2


def test_two_resource_mechanism_on_three_resources_is_a_domain_error(tmp_path: Path) -> None:
    path = tmp_path / "three.csv"
    path.write_text("r1,r2,r3\n1,0.5,0.5\n0.5,1,0.5\n", encoding="utf-8")
    assert main(["solve", str(path), "f1"]) == 3
    assert main(["solve", str(path), "gf1"]) == 0
    assert main(["solve", str(path), "fg", "--g", "coord:4"]) == 3


def test_malformed_score_is_an_input_error(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["solve", EXAMPLE_1, "fg", "--g", "median"]) == 2
    assert main(["solve", EXAMPLE_1, "fg", "--g", "linear:1,b"]) == 2
    assert main(["solve", EXAMPLE_1, "fg", "--g", "linear:1,-2"]) == 3
    assert "error:" in capsys.readouterr().err


def test_solve_reports_the_score_it_filled(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["solve", EXAMPLE_1, "gf1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[:2] == ["mechanism: gf1", "score: coord:1"]

    assert main(["solve", EXAMPLE_1, "fg", "--g", "linear:1,2", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["score"] == "linear:1.0,2.0"

    assert main(["solve", EXAMPLE_1, "drf", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["score"] is None


def test_verify_passes_for_drf(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", EXAMPLE_1, "drf"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[:4] == ["si: pass", "ef: pass", "po: pass", "non_wasteful: pass"]


def test_verify_finds_f2_manipulation(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", EXAMPLE_2, "f2", "--sp-grid", "100", "--json"]) == 1
    record = json.loads(capsys.readouterr().out)
    assert not record["passed"]
    assert record["si"]["passed"] and record["ef"]["passed"] and record["po"]["passed"]
    assert record["sp_grid"] == 100
    assert record["manipulation"]["gain"] >= 1 / 42 - 1e-6


def test_verify_f2star_has_no_manipulation(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", EXAMPLE_2, "f2star", "--sp-grid"]) == 0
    out = capsys.readouterr().out
    assert "manipulation: none on the 100-point grid" in out


def test_gen_adversarial_drf_instance(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["gen", "--kind", "adv-drf", "--n", "2000", "--alpha", "0.25"]) == 0
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0] == "r1,r2"
    assert len(lines) == 2001
    assert all(line == "1.0,0.0005" for line in lines[1:1501])
    assert lines[1501] == "0.00025,1.0"
    assert "alpha_realized=0.25" in captured.err
    assert "dominant_split=r1:1500,r2:500" in captured.err


def test_gen_alpha_writes_file(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    target = tmp_path / "gen" / "alpha.csv"
    assert main(["gen", "--kind", "alpha", "--n", "2", "--alpha", "0.5", "--seed", "3", "--output", str(target)]) == 0
    out = capsys.readouterr().out
    assert f"wrote {target}" in out
    assert "n=2" in out
    rows = target.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "r1,r2"
    assert len(rows) == 3


def test_gen_trace_reports_pool(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    target = tmp_path / "trace.csv"
    assert main(["gen", "--kind", "trace", "--n", "10", "--path", SAMPLE_TRACE, "--output", str(target)]) == 0
    out = capsys.readouterr().out
    assert "trace_rows=1000 skipped=0 cpu_dominant=0.666" in out
    assert len(target.read_text(encoding="utf-8").splitlines()) == 11


def test_gen_rejects_missing_parameters() -> None:
    assert main(["gen", "--kind", "trace", "--n", "10"]) == 2
    assert main(["gen", "--kind", "alpha", "--n", "10"]) == 2
    assert main(["gen", "--kind", "alpha", "--n", "10", "--alpha", "0.9"]) == 2
    assert main(["gen", "--kind", "adv_thm6_case2", "--n", "100", "--m", "3", "--alpha", "0.31", "--beta", "0.4"]) == 2


def test_bounds_csv(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["bounds", "--tags", "drf,f2star", "--alphas", "0.1,0.5", "--n", "20"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 2
    assert float(rows[0]["drf_sw_bound"]) == pytest.approx(1.9)
    assert float(rows[1]["drf_util_bound"]) == pytest.approx(2.0)
    assert float(rows[1]["f2star_sw_bound"]) == pytest.approx(3.0 / 2.45)


def test_bounds_default_grid(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["bounds"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("alpha,drf_sw_bound,drf_util_bound,f1_sw_bound")
    assert len(lines) == 11


def test_bounds_out_of_domain() -> None:
    assert main(["bounds", "--tags", "hybrid-sw"]) == 3
    assert main(["bounds", "--alphas", "0.7"]) == 3


def test_bad_tolerance_environment_is_an_input_error(
    monkeypatch: pytest.MonkeyPatch,
    capsys: pytest.CaptureFixture[str],
) -> None:
    monkeypatch.setenv("ALLOC_EPS", "tiny")
    assert main(["solve", EXAMPLE_1, "drf"]) == 2
    assert "ALLOC_EPS" in capsys.readouterr().err


def test_unknown_mechanism_is_rejected_by_the_parser() -> None:
    with pytest.raises(SystemExit) as excinfo:
        main(["solve", EXAMPLE_1, "maxmin"])
    assert excinfo.value.code == 2
