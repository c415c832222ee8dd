import json

import numpy as np
import pytest

from charwave.cli import (BUILTIN_SCENARIOS, ConfigError, RunConfig,
                          emit_plot_data, main, parse_config, run_pipeline)


class TestConfigParsing:
    def test_basic_types(self):
        cfg = parse_config("a = 1\nb = 2.5\nc = hello\nd = true\ne = off\n")
        assert cfg == {"a": 1, "b": 2.5, "c": "hello", "d": True, "e": False}

    def test_comments_and_blanks(self):
        cfg = parse_config("# full line\n\nkey = 3 # trailing\n")
        assert cfg == {"key": 3}

    def test_error_carries_line_number(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config("ok = 1\nnot a pair\n")

    def test_unknown_scenario_rejected(self):
        with pytest.raises(ConfigError, match="scenario"):
            RunConfig(parse_config("scenario = warp"))

    def test_lists_and_intervals(self):
        cfg = RunConfig(parse_config(
            "scenario = solve\ndiagnostics.slice_times = 0.1, 0.2\n"
            "diagnostics.intervals = -1:0, 0:1\n"))
        assert cfg.slice_times() == [0.1, 0.2]
        assert cfg.intervals() == [(-1.0, 0.0), (0.0, 1.0)]

    def test_builtin_scenarios_parse(self):
        for name, text in BUILTIN_SCENARIOS.items():
            RunConfig(parse_config(text))


def run_zero(tmp_path, sub="a", **overrides):
    raw = parse_config(BUILTIN_SCENARIOS["zero"])
    raw["grid.dX"] = 0.05
    raw["grid.dY"] = 0.05
    raw.update(overrides)
    out = tmp_path / sub
    code = run_pipeline(RunConfig(raw), out_dir=str(out))
    return code, out


class TestRunPipeline:
    def test_zero_scenario_artifacts(self, tmp_path):
        code, out = run_zero(tmp_path)
        assert code == 0
        for name in ("grid.csv", "series.csv", "diagnostics.json",
                     "summary.txt", "slice_0.5.csv", "slice_0.5.json",
                     "plots/series_long.csv", "plots/slices_long.csv"):
            assert (out / name).exists(), name
        series = np.loadtxt(out / "series.csv", delimiter=",", skiprows=1)
        assert series.shape[0] == 3           # one row per slice time
        assert np.all(series[:, 1:] == 0.0)   # all series vanish
        report = json.loads((out / "diagnostics.json").read_text())
        assert all(c["pass"] for c in report["checks"])
        meta = json.loads((out / "slice_0.5.json").read_text())
        assert meta["singular"] == 0 and meta["samples"] > 0

    def test_deterministic_output(self, tmp_path):
        _, out1 = run_zero(tmp_path, "a")
        _, out2 = run_zero(tmp_path, "b")
        for name in ("grid.csv", "series.csv", "plots/series_long.csv",
                     "summary.txt", "diagnostics.json"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_emitted_csv_roundtrips_bit_exact(self, tmp_path):
        _, out = run_zero(tmp_path)
        raw = np.loadtxt(out / "series.csv", delimiter=",", skiprows=1, ndmin=2)
        # rewrite through the same formatter and re-read: values identical
        emit_plot_data(out)
        long = np.loadtxt(out / "plots" / "series_long.csv", delimiter=",",
                          skiprows=1, usecols=(1, 2), ndmin=2)
        assert long.shape[0] == raw.shape[0] * (raw.shape[1] - 1)
        for j in range(1, raw.shape[1]):
            block = long[(j - 1) * raw.shape[0]: j * raw.shape[0]]
            assert np.array_equal(block[:, 0], raw[:, 0])
            assert np.array_equal(block[:, 1], raw[:, j])

    def test_bump_solve_passes(self, tmp_path):
        raw = parse_config(BUILTIN_SCENARIOS["bump_trig"])
        raw["grid.dX"] = 0.04
        raw["grid.dY"] = 0.04
        raw["output.grid_dump"] = False
        code = run_pipeline(RunConfig(raw), out_dir=str(tmp_path / "bump"))
        assert code == 0
        series = np.loadtxt(tmp_path / "bump" / "series.csv", delimiter=",",
                            skiprows=1)
        assert series.shape[0] == 3

    def test_forced_failure_gives_nonzero_exit(self, tmp_path):
        raw = parse_config(BUILTIN_SCENARIOS["bump_trig"])
        raw["grid.dX"] = 0.04
        raw["grid.dY"] = 0.04
        raw["output.grid_dump"] = False
        raw["diagnostics.energy_tol"] = 1e-12
        code = run_pipeline(RunConfig(raw), out_dir=str(tmp_path / "f"))
        assert code == 1
        summary = (tmp_path / "f" / "summary.txt").read_text()
        assert "FAIL" in summary and "result: FAIL" in summary

    def test_blowup_scenario(self, tmp_path):
        # coarsened demo: the abort check fails by design (the 1e6 threshold
        # is unreachable for energy-bounded first-order runs), everything
        # else reports and the exit status is honestly nonzero
        raw = parse_config(BUILTIN_SCENARIOS["blowup_trig"])
        raw.update({"initial.dx": 1e-3, "grid.dX": 0.05, "grid.dY": 0.05,
                    "grid.T": 0.45, "blowup.fd_T": 0.3,
                    "blowup.holder_refine": False,
                    "diagnostics.slice_times": "0.1, 0.25"})
        out = tmp_path / "blow"
        code = run_pipeline(RunConfig(raw), out_dir=str(out))
        assert code == 1
        report = json.loads((out / "diagnostics.json").read_text())
        by_name = {c["name"]: c["pass"] for c in report["checks"]}
        assert not by_name["FD aborts (blow-up detected / numerical blow-up)"]
        assert by_name["characteristic fields finite"]
        assert by_name["singular-flagged slice samples"]
        assert by_name["energy bound E(t) <= E0*1.02"]
        assert "energy drift" not in by_name    # not expected past blow-up
        assert (out / "fd_status.json").exists()
        assert (out / "slice_singular.csv").exists()

    def test_picard_study_scenario(self, tmp_path):
        raw = parse_config(BUILTIN_SCENARIOS["picard_bump"])
        raw.update({"grid.dX": 0.05, "grid.dY": 0.05, "grid.T": 0.4,
                    "initial.dx": 0.004})
        out = tmp_path / "pic"
        code = run_pipeline(RunConfig(raw), out_dir=str(out))
        assert code == 0
        ratios = np.loadtxt(out / "ratios.csv", delimiter=",", skiprows=1, ndmin=2)
        assert np.all(ratios[:, 1] < 1.0)

    def test_csv_initial_data(self, tmp_path):
        from charwave.initdata import bump_profile
        xs = np.round(np.arange(-1.0, 1.0001, 0.01), 10)
        vals = bump_profile(0.2, 0.0, 0.3, 0.8)(xs)
        path = tmp_path / "v1.csv"
        np.savetxt(path, np.column_stack([xs, vals]), delimiter=",", fmt="%.17g")
        code, out = run_zero(tmp_path, "csv",
                             **{"initial.v1_csv": str(path),
                                "initial.dx": 0.01,
                                "diagnostics.slice_times": "0.25, 0.5"})
        assert code == 0
        report = json.loads((out / "diagnostics.json").read_text())
        names = {c["name"]: c for c in report["checks"]}
        assert names["energy drift"]["pass"]


class TestMain:
    def test_scenarios_listing(self, capsys):
        assert main(["scenarios"]) == 0
        out = capsys.readouterr().out
        for name in BUILTIN_SCENARIOS:
            assert name in out

    def test_run_with_overrides(self, tmp_path):
        cfgfile = tmp_path / "z.cfg"
        cfgfile.write_text(BUILTIN_SCENARIOS["zero"])
        code = main(["run", str(cfgfile), "--out", str(tmp_path / "o"),
                     "--override", "grid.dX=0.05", "--override", "grid.dY=0.05"])
        assert code == 0
        assert (tmp_path / "o" / "summary.txt").exists()

    def test_config_error_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("scenario = solve\nbroken line\n")
        assert main(["run", str(bad)]) == 2
        assert "config error" in capsys.readouterr().err

    def test_missing_file_exit_code(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "nope.cfg")]) == 2

    def test_bad_override(self, tmp_path, capsys):
        cfgfile = tmp_path / "z.cfg"
        cfgfile.write_text(BUILTIN_SCENARIOS["zero"])
        assert main(["run", str(cfgfile), "--override", "oops"]) == 2
