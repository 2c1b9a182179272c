"""Configuration loading, CLI subcommands, and end-to-end run outputs."""

import dataclasses
import json
import os

import numpy as np
import pytest

from sixdma.cli import CSV_HEADER, main
from sixdma.config import (
    ConfigError,
    ScenarioConfig,
    library_config_hash,
    load_config,
)
from sixdma.profiler import CandidateLibrary, save_library
from sixdma.simulate import run_single

RUN_YAML = """\
run:
  T_max: 20
  seeds: [1]
  schemes: [fpa, single_step]
sweep:
  tx_dbm: [23.0]
  K: [5]
  N: [10]
"""

TINY_YAML = """\
mobility:
  area_x: 15.0
  area_y: 15.0
run:
  T_max: 10
  seeds: [1]
  schemes: [fpa]
sweep:
  K: [2]
  N: [5]
"""


@pytest.fixture(scope="module")
def run_cfg_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "run.yaml"
    path.write_text(RUN_YAML)
    return str(path)


def prime_library(out_dir, library, config):
    """Drop the session library into out_dir under its cache name."""
    os.makedirs(out_dir, exist_ok=True)
    h = library_config_hash(config)
    lib = CandidateLibrary(entries=library.entries,
                           scored_pairs=library.scored_pairs, config_hash=h)
    path = os.path.join(out_dir, f"library-{h}.json")
    save_library(lib, path)
    return path


def read_rows(out_dir):
    lines = (out_dir / "metrics.csv").read_text().splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


class TestConfig:
    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert load_config(str(path)) == ScenarioConfig()

    def test_unknown_top_level_key(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("runn: {}\n")
        with pytest.raises(ConfigError, match="runn"):
            load_config(str(path))

    def test_unknown_nested_key_names_path(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("run:\n  bogus: 3\n")
        with pytest.raises(ConfigError, match="run"):
            load_config(str(path))

    def test_unknown_scheme_rejected(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("run:\n  schemes: [teleport]\n")
        with pytest.raises(ConfigError, match="teleport"):
            load_config(str(path))

    def test_list_field_requires_list(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("run:\n  seeds: 3\n")
        with pytest.raises(ConfigError, match="seeds"):
            load_config(str(path))

    def test_values_applied(self, tmp_path):
        path = tmp_path / "ok.yaml"
        path.write_text("geometry:\n  F: 8\nsweep:\n  K: [10, 20]\n")
        cfg = load_config(str(path))
        assert cfg.geometry.F == 8
        assert cfg.sweep.K == (10, 20)
        assert cfg.radio == ScenarioConfig().radio

    def test_grid_spec_mirrors_mobility(self):
        cfg = ScenarioConfig()
        gs = cfg.grid_spec()
        assert gs.area_x == cfg.mobility.area_x
        assert gs.cell_size == cfg.grid.cell_size
        assert gs.z_ref == cfg.mobility.z_vehicle

    def test_library_hash_ignores_run_and_sweep(self):
        cfg = ScenarioConfig()
        h0 = library_config_hash(cfg)
        assert len(h0) == 16
        run2 = dataclasses.replace(cfg.run, T_max=7, seeds=(9,))
        sweep2 = dataclasses.replace(cfg.sweep, K=(99,))
        assert library_config_hash(
            dataclasses.replace(cfg, run=run2, sweep=sweep2)) == h0

    def test_library_hash_tracks_model_inputs(self):
        cfg = ScenarioConfig()
        h0 = library_config_hash(cfg)
        geo = dataclasses.replace(cfg.geometry, F=8)
        assert library_config_hash(dataclasses.replace(cfg, geometry=geo)) != h0
        prof = dataclasses.replace(cfg.profiler, top_h=3)
        assert library_config_hash(dataclasses.replace(cfg, profiler=prof)) != h0
        assert library_config_hash(
            dataclasses.replace(cfg, bs_center=(100.0, 150.0, 10.0))) != h0
        run2 = dataclasses.replace(cfg.run, library_seed=5)
        assert library_config_hash(dataclasses.replace(cfg, run=run2)) != h0


class TestRunCommand:
    def test_outputs(self, tmp_path, library, run_cfg_path, capsys):
        cfg = load_config(run_cfg_path)
        out = tmp_path / "out"
        prime_library(out, library, cfg)
        rc = main(["run", "--config", run_cfg_path, "--out-dir", str(out),
                   "--quiet"])
        assert rc == 0
        assert capsys.readouterr().out == ""

        lines = (out / "metrics.csv").read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert CSV_HEADER == ("scheme,seed,K,tx_dbm,N,period,rate_bps,"
                              "move_steps,time_steps,decision_ms")
        # 2 schemes x 1 seed x (T_max=20 / N=10) periods
        assert len(lines) == 1 + 4

        rows = read_rows(out)
        for row in rows:
            assert row["seed"] == "1"
            assert row["K"] == "5"
            assert row["tx_dbm"] == "23"
            assert row["N"] == "10"
            assert float(row["rate_bps"]) > 0
            assert row["decision_ms"] == "0.000"
        fpa_rows = [r for r in rows if r["scheme"] == "fpa"]
        ss_rows = [r for r in rows if r["scheme"] == "single_step"]
        assert len(fpa_rows) == 2 and len(ss_rows) == 2
        assert all(r["move_steps"] == "0" and r["time_steps"] == "0"
                   for r in fpa_rows)
        assert all(int(r["time_steps"]) <= 1 for r in ss_rows)

        summary = json.loads((out / "summary.json").read_text())
        assert {r["scheme"] for r in summary["runs"]} == {"fpa", "single_step"}
        expected_keys = {
            "scheme", "seed", "K", "tx_dbm", "N", "periods", "mean_rate_bps",
            "total_move_steps", "mean_move_steps", "max_move_steps",
            "mean_time_steps", "max_time_steps", "mean_decision_ms",
        }
        for r in summary["runs"]:
            assert set(r) == expected_keys
            assert r["periods"] == 2

        audit = [json.loads(l) for l in
                 (out / "audit.jsonl").read_text().splitlines()]
        assert audit
        assert {a["scheme"] for a in audit} == {"single_step"}
        for a in audit:
            assert set(a) >= {"period", "scores", "moves", "positions",
                              "rate_bps"}

    def test_byte_identical_reruns(self, tmp_path, library, run_cfg_path):
        cfg = load_config(run_cfg_path)
        blobs = []
        for name in ("a", "b"):
            out = tmp_path / name
            prime_library(out, library, cfg)
            assert main(["run", "--config", run_cfg_path,
                         "--out-dir", str(out), "--quiet"]) == 0
            blobs.append(tuple((out / f).read_bytes() for f in
                               ("metrics.csv", "summary.json", "audit.jsonl")))
        assert blobs[0] == blobs[1]

    def test_sweep_and_scheme_overrides(self, tmp_path, library, run_cfg_path):
        cfg = load_config(run_cfg_path)
        out = tmp_path / "out"
        prime_library(out, library, cfg)
        rc = main(["run", "--config", run_cfg_path, "--out-dir", str(out),
                   "--quiet", "--scheme", "fpa", "--sweep", "K=3",
                   "--sweep", "N=5", "--seed", "2,3"])
        assert rc == 0
        rows = read_rows(out)
        # one scheme, two seeds, 20 // 5 periods each
        assert len(rows) == 8
        assert {r["scheme"] for r in rows} == {"fpa"}
        assert {r["seed"] for r in rows} == {"2", "3"}
        assert all(r["K"] == "3" and r["N"] == "5" for r in rows)

    def test_record_timing_populates_column(self, tmp_path, library,
                                            run_cfg_path):
        cfg_path = os.path.join(os.path.dirname(run_cfg_path), "timed.yaml")
        with open(cfg_path, "w") as fh:
            fh.write(RUN_YAML.replace(
                "run:\n", "run:\n  record_timing: true\n"))
        cfg = load_config(cfg_path)
        assert cfg.run.record_timing
        out = tmp_path / "out"
        prime_library(out, library, cfg)
        assert main(["run", "--config", cfg_path, "--out-dir", str(out),
                     "--quiet"]) == 0
        ms = [float(r["decision_ms"]) for r in read_rows(out)
              if r["scheme"] == "single_step"]
        assert all(v >= 0.0 for v in ms)
        assert any(v > 0.0 for v in ms)


class TestLibraryCache:
    def test_build_then_hit(self, tmp_path, capsys):
        cfg_path = tmp_path / "tiny.yaml"
        cfg_path.write_text(TINY_YAML)
        out = tmp_path / "out"
        assert main(["build-library", "--config", str(cfg_path),
                     "--out-dir", str(out)]) == 0
        first = capsys.readouterr().out
        assert "library built:" in first
        lib_path = first.strip().splitlines()[-1]
        blob = open(lib_path, "rb").read()

        assert main(["build-library", "--config", str(cfg_path),
                     "--out-dir", str(out)]) == 0
        second = capsys.readouterr().out
        assert "library cache hit:" in second
        assert open(lib_path, "rb").read() == blob

    def test_corrupted_cache_fails_actionably(self, tmp_path, library,
                                              run_cfg_path, capsys):
        cfg = load_config(run_cfg_path)
        out = tmp_path / "out"
        path = prime_library(out, library, cfg)
        with open(path, "w") as fh:
            fh.write("{broken")
        rc = main(["run", "--config", run_cfg_path, "--out-dir", str(out),
                   "--quiet"])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_export_heatmap(self, tmp_path, library, run_cfg_path, capsys):
        cfg = load_config(run_cfg_path)
        out = tmp_path / "out"
        prime_library(out, library, cfg)
        assert main(["export-heatmap", "--config", run_cfg_path,
                     "--out-dir", str(out), "--quiet"]) == 0
        heat = (out / "heatmap.csv").read_text().splitlines()
        assert heat[0] == "gx,gy,best_rate_bps"
        assert len(heat) == 1 + 400


COST_METRICS = """\
scheme,seed,K,tx_dbm,N,period,rate_bps,move_steps,time_steps,decision_ms
alpha,1,30,23,10,1,100.000,2,1,0.000
alpha,1,30,23,10,2,50.000,0,0,0.000
beta,1,30,23,5,1,80.000,3,2,0.000
"""


class TestCostReport:
    def test_aggregation(self, tmp_path, capsys):
        src = tmp_path / "metrics.csv"
        src.write_text(COST_METRICS)
        dst = tmp_path / "report.csv"
        assert main(["cost-report", "--in", str(src), "--out", str(dst)]) == 0
        out = capsys.readouterr().out
        assert "75.000" in out and "1.0000" in out

        lines = dst.read_text().splitlines()
        assert lines[0] == ("scheme,N,periods,mean_rate_bps,mean_move_steps,"
                            "max_move_steps,mean_time_steps,max_time_steps")
        assert lines[1] == "alpha,10,2,75.000,1.0000,2,0.5000,1"
        assert lines[2] == "beta,5,1,80.000,3.0000,3,2.0000,2"

    def test_empty_metrics(self, tmp_path, capsys):
        src = tmp_path / "metrics.csv"
        src.write_text(CSV_HEADER + "\n")
        assert main(["cost-report", "--in", str(src)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("scheme")

    def test_unexpected_header(self, tmp_path):
        src = tmp_path / "metrics.csv"
        src.write_text("foo,bar\n1,2\n")
        with pytest.raises(SystemExit):
            main(["cost-report", "--in", str(src)])


class TestArgErrors:
    def test_bad_sweep_axis(self, tmp_path, capsys):
        rc = main(["run", "--sweep", "bogus=1", "--out-dir", str(tmp_path),
                   "--quiet"])
        assert rc == 2
        assert "bad --sweep" in capsys.readouterr().err

    def test_bad_sweep_value(self, tmp_path, capsys):
        rc = main(["run", "--sweep", "K=abc", "--out-dir", str(tmp_path),
                   "--quiet"])
        assert rc == 2
        assert "numeric" in capsys.readouterr().err

    def test_bad_scheme(self, tmp_path, capsys):
        rc = main(["run", "--scheme", "warp", "--out-dir", str(tmp_path),
                   "--quiet"])
        assert rc == 2
        assert "warp" in capsys.readouterr().err

    def test_bad_seed(self, tmp_path, capsys):
        rc = main(["run", "--seed", "1,x", "--out-dir", str(tmp_path),
                   "--quiet"])
        assert rc == 2
        assert "--seed" in capsys.readouterr().err

    def test_bad_config_reported(self, tmp_path, capsys):
        cfg = tmp_path / "bad.yaml"
        cfg.write_text("nonsense_key: 1\n")
        rc = main(["run", "--config", str(cfg), "--out-dir", str(tmp_path),
                   "--quiet"])
        assert rc == 2
        assert "nonsense_key" in capsys.readouterr().err


class TestRunSingle:
    def test_period_partition(self, config, space, graph, library):
        run = dataclasses.replace(config.run, T_max=25)
        cfg = dataclasses.replace(config, run=run)
        result = run_single(cfg, space, graph, library, "fpa",
                            seed=0, K=3, tx_dbm=23.0, N=10)
        assert [p.period for p in result.periods] == [1, 2]
        assert result.scheme == "fpa"
        assert result.mean_rate == pytest.approx(
            np.mean([p.rate_bps for p in result.periods]))

    def test_repeat_identical(self, config, space, graph, library):
        run = dataclasses.replace(config.run, T_max=20)
        cfg = dataclasses.replace(config, run=run)
        a = run_single(cfg, space, graph, library, "single_step",
                       seed=3, K=4, tx_dbm=23.0, N=10)
        b = run_single(cfg, space, graph, library, "single_step",
                       seed=3, K=4, tx_dbm=23.0, N=10)
        assert a.periods == b.periods

    def test_summary_statistics(self, config, space, graph, library):
        run = dataclasses.replace(config.run, T_max=30)
        cfg = dataclasses.replace(config, run=run)
        result = run_single(cfg, space, graph, library, "single_step",
                            seed=1, K=5, tx_dbm=23.0, N=10)
        s = result.summary()
        moves = [p.move_steps for p in result.periods]
        assert s["periods"] == 3
        assert s["total_move_steps"] == sum(moves)
        assert s["max_move_steps"] == max(moves)
        assert s["mean_move_steps"] == pytest.approx(np.mean(moves))
        assert s["mean_decision_ms"] == 0.0
