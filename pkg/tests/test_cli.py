"""Command-line front end: configs, CSV outputs, determinism, exit codes."""

import json
import os

import numpy as np
import pytest

from bregopt.cli import (
    OUTPUT_DIR_ENV,
    SUMMARY_HEADER,
    TRACE_HEADER,
    ConfigError,
    ExperimentConfig,
    main,
)


@pytest.fixture
def outdir(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    return tmp_path


def solve_args(out, extra=()):
    # loose tolerance keeps the runs to a few thousand iterations
    return ["solve", "--tol", "1e-6", "--trace-every", "500", "--out", out, *extra]


def read(path):
    with open(path) as fh:
        return fh.read()


def strip_wall_time(summary_text):
    """Summary rows minus the wall_time column (the one nondeterministic field)."""
    lines = summary_text.strip().splitlines()
    return [",".join(line.split(",")[:-1]) for line in lines]


class TestConfig:
    def test_round_trip(self):
        cfg = ExperimentConfig(variant="ep", x0=[-0.5], tol=1e-8)
        assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"tolerance": 1e-8})

    def test_bad_variant_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"variant": "mep"})

    def test_bad_numbers_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"tol": -1.0})
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"x0": []})


class TestSolve:
    def test_writes_summary_and_traces(self, outdir, capsys):
        rc = main(solve_args("runs", ["--x0", "-1.0", "--variant", "gmep"]))
        assert rc == 0
        summary = read(outdir / "runs" / "summary.csv")
        assert summary.splitlines()[0] == SUMMARY_HEADER
        assert len(summary.strip().splitlines()) == 2
        trace = read(outdir / "runs" / "trace_gmep_x0=-1.csv")
        assert trace.splitlines()[0] == TRACE_HEADER
        # every row parses as 6 floats with n increasing
        ns = []
        for line in trace.strip().splitlines()[1:]:
            parts = line.split(",")
            assert len(parts) == 6
            [float(p) for p in parts]
            ns.append(int(parts[0]))
        assert ns == sorted(ns)

    def test_deterministic_reruns(self, outdir):
        main(solve_args("a", ["--x0", "-1.0", "--variant", "both"]))
        main(solve_args("b", ["--x0", "-1.0", "--variant", "both"]))
        for name in ("trace_gmep_x0=-1.csv", "trace_ep_x0=-1.csv"):
            assert read(outdir / "a" / name) == read(outdir / "b" / name)
        # summaries agree byte-for-byte except the wall-clock column
        assert strip_wall_time(read(outdir / "a" / "summary.csv")) == strip_wall_time(
            read(outdir / "b" / "summary.csv")
        )

    def test_csv_fields_round_trip_exactly(self, outdir):
        main(solve_args("rt", ["--x0", "-0.5"]))
        for line in read(outdir / "rt" / "trace_gmep_x0=-0.5.csv").strip().splitlines()[1:]:
            for field in line.split(",")[1:]:
                v = float(field)
                assert "%.17g" % v == field or field == "nan"

    def test_config_file_with_flag_override(self, outdir, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"x0": [-0.5], "variant": "ep", "tol": 1e-6,
                                        "trace_every": 500, "out": "fromfile"}))
        rc = main(["solve", "--config", str(cfg_path), "--out", "override"])
        assert rc == 0
        assert (outdir / "override" / "trace_ep_x0=-0.5.csv").exists()
        assert not (outdir / "fromfile").exists()

    def test_immediate_convergence_from_solution(self, outdir):
        rc = main(["solve", "--x0", "0.0", "--out", "zero"])
        assert rc == 0
        row = read(outdir / "zero" / "summary.csv").strip().splitlines()[1].split(",")
        assert row[0] == "0" and row[2] == "1" and float(row[3]) == 0.0

    def test_exit_1_when_not_converged(self, outdir):
        rc = main(["solve", "--x0", "-1.0", "--tol", "1e-10", "--max-iter", "100",
                   "--out", "short"])
        assert rc == 1


class TestCompare:
    def test_custom_grid(self, outdir, capsys):
        rc = main(["compare", "--x0", "-1.0", "--tol", "1e-6", "--trace-every", "500",
                   "--out", "cmp"])
        assert rc == 0
        comparison = read(outdir / "cmp" / "comparison.csv")
        lines = comparison.strip().splitlines()
        assert lines[0] == "x0,variant,iterations,reference,deviation_pct"
        assert len(lines) == 3  # gmep + ep for the single x0
        assert (outdir / "cmp" / "comparison.txt").exists()
        conv = read(outdir / "cmp" / "convergence_gmep_x0=-1.csv")
        assert conv.splitlines()[0] == "n,abs_x,d_sol"
        # |x_n| decreases overall along the run
        vals = [float(l.split(",")[1]) for l in conv.strip().splitlines()[1:]]
        assert vals[-1] < vals[0]
        err = capsys.readouterr().err
        assert "missing some of the baseline initial points" in err


class TestVerify:
    def test_select_passes(self, capsys):
        rc = main(["verify", "--select", "resolvent/paper-example-gmep"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "PASS" in out and "FAIL" not in out

    def test_faulty_resolvent_fails(self, capsys):
        rc = main(["verify", "--select", "resolvent/paper-example-gmep",
                   "--inject-faulty-resolvent"])
        out = capsys.readouterr().out
        assert rc == 1
        assert "FAIL" in out


class TestExitCodes:
    def test_usage_error_is_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_config_error_is_2(self, outdir, tmp_path, capsys):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text(json.dumps({"variant": "nope"}))
        assert main(["solve", "--config", str(cfg_path)]) == 2

    def test_unknown_problem_is_2(self, outdir, capsys):
        assert main(["solve", "--problem", "no-such-problem", "--max-iter", "10"]) == 2
