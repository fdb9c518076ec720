"""CLI subcommands run in-process; exit codes gate thresholds."""

import json

import pytest

from mwcsense.cli import main
from mwcsense.serialization import validate_report


def test_validate_config_passes(capsys):
    assert main(["validate-config"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] chip rate covers f_max" in out
    assert "[PASS] slices cover the band" in out
    assert '"ratio_to_nyquist"' in out


def test_sweep_single_point_writes_report(tmp_path, capsys):
    code = main(
        [
            "sweep",
            "--f-start", "400e6",
            "--f-stop", "400e6",
            "--out-dir", str(tmp_path),
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "[PASS] sweep support+carrier success" in out
    doc = json.loads((tmp_path / "report.json").read_text())
    validate_report(doc)
    assert doc["kind"] == "sweep"
    assert (tmp_path / "sweep.csv").exists()


def test_sweep_bad_order_exits_2(capsys):
    assert main(["sweep", "--f-start", "500e6", "--f-stop", "400e6"]) == 2
    assert "error:" in capsys.readouterr().err


def test_montecarlo_single_point(tmp_path, capsys):
    code = main(
        [
            "montecarlo",
            "--axis", "m",
            "--grid", "4",
            "--trials", "2",
            "--out-dir", str(tmp_path),
        ]
    )
    assert code == 0
    assert "m=4:" in capsys.readouterr().out
    assert (tmp_path / "montecarlo.csv").exists()


def test_montecarlo_rejected_point_fails(capsys):
    assert main(["montecarlo", "--axis", "sparsity", "--grid", "500", "--trials", "1"]) == 1
    assert "[FAIL] all grid points ran" in capsys.readouterr().out


def test_time_budget_verdict(capsys):
    assert main(["time", "--repetitions", "2"]) == 0
    assert "[PASS] sensing median wall time" in capsys.readouterr().out
    assert main(["time", "--repetitions", "1", "--budget-ms", "1e-6"]) == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_sweep_svg_render(tmp_path):
    pytest.importorskip("matplotlib")
    code = main(
        [
            "sweep",
            "--f-start", "400e6",
            "--f-stop", "410e6",
            "--f-step", "10e6",
            "--out-dir", str(tmp_path),
            "--svg",
        ]
    )
    assert code == 0
    svg = (tmp_path / "sweep.svg").read_text()
    assert svg.lstrip().startswith("<?xml")
