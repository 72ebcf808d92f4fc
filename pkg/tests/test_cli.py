import csv
import json

import pytest

from aerocell.cli import main, parse_grid, sweep_points
from aerocell.config import paper_defaults_path
from aerocell.errors import ConfigError

FAST = ["--runs", "2"]


def _metrics(out):
    return json.loads((out / "metrics.json").read_text())


def test_help_for_every_subcommand(capsys):
    for cmd in ("run", "validate", "sweep", "gen-weather", "explain"):
        with pytest.raises(SystemExit) as exc:
            main([cmd, "--help"])
        assert exc.value.code == 0
        assert "usage" in capsys.readouterr().out


class TestRun:
    def test_no_res(self, tmp_path):
        out = tmp_path / "o"
        assert main(["run", "--config", str(paper_defaults_path()), "--no-res", "--no-csv", "--out", str(out), *FAST]) == 0
        m = _metrics(out)
        assert all(s["pv_energy_total_per_uav"] == 0.0 for s in m["seasons"].values())
        assert sorted(p.name for p in tmp_path.iterdir()) == ["o"]

    def test_seed_repeatable(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["run", "--seed", "7", "--out", str(out), *FAST]) == 0
        assert (a / "metrics.json").read_bytes() == (b / "metrics.json").read_bytes()
        assert (a / "steps.csv").read_bytes() == (b / "steps.csv").read_bytes()

    def test_milliwatt_phase_shifters(self, tmp_path):
        out = tmp_path / "o"
        assert main(["run", "--pshifter-units=mw", "--out", str(out), "--runs", "1"]) == 0
        with (out / "steps.csv").open() as fh:
            row = next(csv.DictReader(fh))
        assert float(row["p_ris"]) == pytest.approx(0.1248)

    def test_plot(self, tmp_path):
        out = tmp_path / "o"
        assert main(["run", "--plot", "--no-csv", "--out", str(out), "--runs", "1"]) == 0
        assert (out / "battery.svg").exists() and (out / "pv_output.svg").exists()

    def test_bad_override_is_config_error(self, tmp_path, capsys):
        assert main(["run", "--set", "pv.bogus=1", "--out", str(tmp_path)]) == 2
        assert "bogus" in capsys.readouterr().err

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        assert main(["run", "--out", str(blocker / "sub"), "--runs", "1"]) == 3

    def test_missing_config_file(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) in (2, 3)


class TestValidate:
    def test_defaults(self, capsys):
        assert main(["validate"]) == 0
        assert "matches bundled defaults" in capsys.readouterr().out

    def test_battery_rating_violation(self, capsys):
        assert main(["validate", "--set", "battery.E_unit_max=700"]) == 1
        assert "E_unit_max" in capsys.readouterr().err

    def test_missing_weather_column(self, tmp_path, capsys):
        p = tmp_path / "w.csv"
        p.write_text("timestamp,temp_c,pressure_pa\n2022-06-21T00:00:00Z,10,101325\n")
        assert main(["validate", "--weather", str(p)]) == 1
        assert "ghi_wm2" in capsys.readouterr().err

    def test_reports_diffs(self, capsys):
        assert main(["validate", "--set", "pv.N_PV_p=10"]) == 0
        assert "pv.N_PV_p: 5 -> 10" in capsys.readouterr().out


class TestSweep:
    def test_two_by_two(self, tmp_path):
        args = ["sweep", "--grid", "pv.N_PV_p=0,5", "--grid", "simulation.seed=1,2", "--out", str(tmp_path), "--runs", "1"]
        assert main(args) == 0
        rows = list(csv.DictReader((tmp_path / "sweep.csv").open()))
        assert len(rows) == 4
        assert {"point", "anur", "arec_grid", "pv_total"} <= set(rows[0])

    def test_panel_count_monotone(self, tmp_path):
        assert main(["sweep", "--grid", "pv.N_PV_p=0,5,10", "--out", str(tmp_path), *FAST]) == 0
        anur = [float(r["anur"]) for r in csv.DictReader((tmp_path / "sweep.csv").open())]
        assert anur[0] >= anur[1] >= anur[2]

    def test_empty_grid(self, tmp_path):
        assert main(["sweep", "--out", str(tmp_path)]) == 2
        with pytest.raises(ConfigError):
            parse_grid(["pv.N_PV_p="])

    def test_point_cap(self):
        grid = parse_grid(["a=1,2,3,4,5,6,7,8,9,10", "b=1,2,3,4,5,6,7,8,9,10", "c=1,2,3,4,5,6,7,8,9,10,11"])
        with pytest.raises(ConfigError):
            sweep_points(grid)
        assert len(sweep_points(grid[:2])) == 100


def test_gen_weather_round_trip(tmp_path):
    from aerocell.weather_io import load_weather_csv

    assert main(["gen-weather", "--day-of-year", "172", "--peak", "700", "--out", str(tmp_path)]) == 0
    s = load_weather_csv(tmp_path / "weather_doy172.csv")
    assert len(s) == 1440 and s.G_T.max() == pytest.approx(700.0, rel=1e-3)
    assert main(["validate", "--weather", str(tmp_path / "weather_doy172.csv")]) == 0


def test_explain(capsys):
    assert main(["explain", "--pshifter-units", "mw"]) == 0
    out = capsys.readouterr().out
    assert "p_hover" in out and "0.1248" in out


def test_explain_schema(capsys):
    assert main(["explain", "--schema"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "metrics" in doc and "config" in doc
