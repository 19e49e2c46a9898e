"""Smoke tests for the command line interface."""

import pandas as pd

from dlrsim.cli import EXIT_INPUT, EXIT_OK, main
from dlrsim.scenario import builtin_path


def test_calibrate(capsys):
    assert main(["calibrate"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "A-B" in out and "1778.0" in out


def test_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "wind_speed", "--out", str(out)]) == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["wind_speed", "ac_rating_a"]
    assert len(frame) == 51


def test_validate_demo_scenario(capsys):
    config = builtin_path("demo/scenario.yaml")
    assert main(["validate", "--config", str(config)]) == EXIT_OK
    assert "validation passed" in capsys.readouterr().out


def test_missing_config_is_input_error(capsys):
    assert main(["validate", "--config", "/no/such/file.yaml"]) == EXIT_INPUT


def test_bad_scenario_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text(
        "data: {wind: w.csv, pv: p.csv, load: l.csv, tmin: a.csv, tmax: b.csv}\n"
        "span: {start: '2023-12-01T00:00:00Z', end: '2023-12-02T00:00:00Z'}\n"
    )
    assert main(["validate", "--config", str(bad)]) == EXIT_INPUT
