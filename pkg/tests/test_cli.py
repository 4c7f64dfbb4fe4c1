"""CLI: subcommands, exit codes, artifacts, determinism."""

import json
import subprocess
import sys

import pytest

from coldgen import build_pinned_sets, import_mask_csv
from coldgen.cli import main
from coldgen.config import config_from_dict

# A miniature board that keeps every CLI invocation under a second.
SMALL_CONFIG = {
    "grid": {"dx": 0.001, "dy": 0.001},
    "board": {"width": 0.024, "height": 0.032},
    "chips": [
        {"label": "hot_a", "x0": 0.004, "y0": 0.004, "x1": 0.011, "y1": 0.011, "tdp": 40.0},
        {"label": "hot_b", "x0": 0.013, "y0": 0.018, "x1": 0.020, "y1": 0.026, "tdp": 10.0},
    ],
    "ports": {"width": 0.006},
    "rd": {"p_seed": 0.02},  # dense enough that distinct seeds diverge
    "loop": {"outer_rounds": 2, "rd_steps_per_round": 60},
}


@pytest.fixture
def small_config_path(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(SMALL_CONFIG), encoding="utf-8")
    return path


def test_baseline_writes_four_files(tmp_path, small_config_path, capsys):
    out = tmp_path / "run"
    code = main(["baseline", "--config", str(small_config_path), "--out", str(out)])
    assert code == 0
    for name in ("baseline_mask.csv", "baseline_temperature.csv",
                 "baseline_temperature.pgm", "baseline_metrics.json"):
        assert (out / name).is_file(), name
    summary = capsys.readouterr().out
    assert summary.startswith("baseline:")
    assert summary.count("\n") == 1


def test_baseline_metrics_ordering(tmp_path, small_config_path):
    out = tmp_path / "run"
    assert main(["baseline", "--config", str(small_config_path), "--out", str(out)]) == 0
    payload = json.loads((out / "baseline_metrics.json").read_text(encoding="utf-8"))
    domain = payload["metrics"]["domain"]
    assert domain["max_c"] >= domain["mean_c"]
    assert payload["solver_converged"] is True
    assert payload["tool_version"]


def test_bad_config_exits_1_with_diagnostic(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"grid": {"dx": -1}}', encoding="utf-8")
    code = main(["baseline", "--config", str(bad), "--out", str(tmp_path / "o")])
    assert code == 1
    err = capsys.readouterr().err
    assert "grid.dx" in err


def test_missing_config_exits_1(tmp_path, capsys):
    code = main(["baseline", "--config", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "o")])
    assert code == 1
    assert capsys.readouterr().err


def test_generate_outputs_and_determinism(tmp_path, small_config_path):
    out1, out2 = tmp_path / "g1", tmp_path / "g2"
    assert main(["generate", "--config", str(small_config_path), "--out", str(out1)]) == 0
    assert main(["generate", "--config", str(small_config_path), "--out", str(out2)]) == 0
    for name in ("generative_mask.csv", "generative_temperature.csv",
                 "generative_temperature.pgm", "generative_v_field.csv",
                 "generative_report.json"):
        assert (out1 / name).is_file(), name
    assert (out1 / "generative_mask.csv").read_bytes() == (out2 / "generative_mask.csv").read_bytes()
    assert (out1 / "generative_report.json").read_bytes() == (out2 / "generative_report.json").read_bytes()


def test_generate_history_and_pins(tmp_path, small_config_path):
    out = tmp_path / "g"
    assert main(["generate", "--config", str(small_config_path), "--out", str(out)]) == 0
    payload = json.loads((out / "generative_report.json").read_text(encoding="utf-8"))
    assert len(payload["history"]) == SMALL_CONFIG["loop"]["outer_rounds"]

    mask = import_mask_csv(out / "generative_mask.csv")
    cfg = config_from_dict(SMALL_CONFIG)
    grid = cfg.build_grid()
    pinned = build_pinned_sets(grid, cfg.build_layout(grid))
    for i, j in pinned.indices:
        assert mask.bits[j, i] == 1


def test_seed_flag_overrides_config(tmp_path, small_config_path):
    out1, out2, out3 = tmp_path / "s1", tmp_path / "s2", tmp_path / "s3"
    assert main(["generate", "--config", str(small_config_path), "--out", str(out1),
                 "--seed", "7"]) == 0
    assert main(["generate", "--config", str(small_config_path), "--out", str(out2),
                 "--seed", "7"]) == 0
    assert main(["generate", "--config", str(small_config_path), "--out", str(out3),
                 "--seed", "8"]) == 0
    m1 = (out1 / "generative_mask.csv").read_bytes()
    assert m1 == (out2 / "generative_mask.csv").read_bytes()
    v1 = (out1 / "generative_v_field.csv").read_bytes()
    assert v1 == (out2 / "generative_v_field.csv").read_bytes()
    assert v1 != (out3 / "generative_v_field.csv").read_bytes()


def test_unstable_dt_exits_3(tmp_path, capsys):
    cfg = dict(SMALL_CONFIG)
    cfg["rd"] = {"dt": 10.0}
    path = tmp_path / "wild.json"
    path.write_text(json.dumps(cfg), encoding="utf-8")
    code = main(["generate", "--config", str(path), "--out", str(tmp_path / "o")])
    assert code == 3
    assert "error" in capsys.readouterr().err


def test_nonconvergence_exits_2_but_writes(tmp_path, capsys):
    cfg = dict(SMALL_CONFIG)
    cfg["loop"] = {"outer_rounds": 2, "rd_steps_per_round": 60, "max_iter": 2}
    path = tmp_path / "slow.json"
    path.write_text(json.dumps(cfg), encoding="utf-8")
    out = tmp_path / "o"
    code = main(["baseline", "--config", str(path), "--out", str(out)])
    assert code == 2
    assert (out / "baseline_metrics.json").is_file()
    payload = json.loads((out / "baseline_metrics.json").read_text(encoding="utf-8"))
    assert payload["solver_converged"] is False


def test_solve_roundtrip(tmp_path, small_config_path):
    out = tmp_path / "b"
    assert main(["baseline", "--config", str(small_config_path), "--out", str(out)]) == 0
    solve_out = tmp_path / "s"
    code = main(["solve", "--config", str(small_config_path), "--out", str(solve_out),
                 "--mask", str(out / "baseline_mask.csv")])
    assert code == 0
    for name in ("solve_temperature.csv", "solve_temperature.pgm", "solve_metrics.json"):
        assert (solve_out / name).is_file(), name
    # identical mask and physics: identical temperatures
    assert (solve_out / "solve_temperature.csv").read_bytes() == \
        (out / "baseline_temperature.csv").read_bytes()


def test_solve_grid_mismatch_exits_1(tmp_path, small_config_path, capsys):
    out = tmp_path / "b"
    assert main(["baseline", "--config", str(small_config_path), "--out", str(out)]) == 0
    other = dict(SMALL_CONFIG)
    other["board"] = {"width": 0.030, "height": 0.032}
    other_path = tmp_path / "other.json"
    other_path.write_text(json.dumps(other), encoding="utf-8")
    code = main(["solve", "--config", str(other_path), "--out", str(tmp_path / "s"),
                 "--mask", str(out / "baseline_mask.csv")])
    assert code == 1
    assert "grid" in capsys.readouterr().err


def test_compare_deltas_cross_check(tmp_path, small_config_path):
    out = tmp_path / "c"
    code = main(["compare", "--config", str(small_config_path), "--out", str(out)])
    assert code == 0
    payload = json.loads((out / "comparison.json").read_text(encoding="utf-8"))
    base = payload["designs"]["baseline"]["metrics"]["domain"]
    gen = payload["designs"]["generative"]["metrics"]["domain"]
    assert payload["delta_max_c"] == pytest.approx(base["max_c"] - gen["max_c"])
    assert payload["delta_mean_c"] == pytest.approx(base["mean_c"] - gen["mean_c"])


def test_pipeline_writes_everything(tmp_path, small_config_path, capsys):
    out = tmp_path / "p"
    code = main(["pipeline", "--config", str(small_config_path), "--out", str(out)])
    assert code == 0
    for name in (
        "baseline_mask.csv", "baseline_temperature.csv", "baseline_temperature.pgm",
        "baseline_metrics.json", "generative_mask.csv", "generative_temperature.csv",
        "generative_temperature.pgm", "generative_v_field.csv", "generative_report.json",
        "comparison.json",
    ):
        assert (out / name).is_file(), name
    summary = capsys.readouterr().out
    assert summary.count("\n") == 3  # one line per phase


def test_outputs_confined_to_outdir(tmp_path, small_config_path):
    out = tmp_path / "only"
    before = set(tmp_path.iterdir())
    assert main(["pipeline", "--config", str(small_config_path), "--out", str(out)]) == 0
    after = set(tmp_path.iterdir())
    assert after - before == {out}


def test_thread_cap_env_parsing(monkeypatch, capsys):
    from coldgen.cli import thread_cap

    monkeypatch.setenv("COLDGEN_THREADS", "4")
    assert thread_cap() == 4
    monkeypatch.setenv("COLDGEN_THREADS", "banana")
    assert thread_cap() == 0
    assert "COLDGEN_THREADS" in capsys.readouterr().err
    monkeypatch.delenv("COLDGEN_THREADS")
    assert thread_cap() == 0


def test_module_entry_point(tmp_path, small_config_path):
    # `python -m coldgen` wires the same main(); smoke-check via subprocess.
    out = tmp_path / "m"
    proc = subprocess.run(
        [sys.executable, "-m", "coldgen", "baseline",
         "--config", str(small_config_path), "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("baseline:")
    assert (out / "baseline_metrics.json").is_file()
