"""CLI: config resolution, CSV/manifest output, exit codes."""

import csv
import os
import subprocess
import sys

import numpy as np
import pytest

from ontolab.cli import CSV_HEADER, main
from ontolab.config import ConfigError, parse_config_text, resolve


def run_cli(args, env_extra=None):
    env = dict(os.environ)
    env.pop("ONTOLAB_SEED", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "ontolab.cli", *args],
        capture_output=True, text=True, env=env,
    )


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_parse_config_text():
    raw = parse_config_text("a = 1\n# comment\nb = two words  # trailing\n\n")
    assert raw == {"a": "1", "b": "two words"}
    with pytest.raises(ConfigError):
        parse_config_text("not a pair\n")
    with pytest.raises(ConfigError):
        parse_config_text("a = 1\na = 2\n")


def test_resolve_defaults_and_priority():
    cfg = resolve("born-sweep", {"variant": "ks-qubit", "n_samples": "50", "seed": "3"}, {})
    assert cfg.model.variant == "ks-qubit"
    assert len(cfg.theta_grid) == 19
    assert cfg.theta_grid[0] == 0.0 and cfg.theta_grid[-1] == pytest.approx(np.pi / 2)
    assert cfg.seed == 3

    # flags beat the file
    cfg = resolve("born-sweep", {"variant": "ks-qubit", "n_samples": "50", "seed": "3"},
                  {"seed": 9})
    assert cfg.seed == 9

    # environment is the lowest-priority seed source
    cfg = resolve("born-sweep", {"variant": "ks-qubit", "n_samples": "50"}, {},
                  env={"ONTOLAB_SEED": "77"})
    assert cfg.seed == 77


def test_resolve_validation_errors_name_the_key():
    with pytest.raises(ConfigError, match="n_samples"):
        resolve("born-sweep", {"variant": "ks-qubit"}, {})
    with pytest.raises(ConfigError, match="bogus"):
        resolve("born-sweep", {"variant": "ks-qubit", "n_samples": "5", "bogus": "1"}, {})
    with pytest.raises(ConfigError, match="delta"):
        resolve("born-sweep", {"variant": "ks-qubit", "n_samples": "5", "delta": "1.5"}, {})
    with pytest.raises(ConfigError, match="n_samples"):
        resolve("born-sweep", {"variant": "ks-qubit", "n_samples": "0"}, {})
    with pytest.raises(ConfigError, match="chain"):
        resolve("sequential", {"variant": "ks-qubit", "n_samples": "5"}, {})
    with pytest.raises(ConfigError, match="delta_grid"):
        resolve("delta-opt", {"variant": "linear-trace", "n_samples": "5"}, {})
    with pytest.raises(ConfigError, match="sampling_law"):
        resolve("contextuality",
                {"variant": "linear-trace", "n_samples": "5", "sampling_law": "nope"}, {})


def test_born_sweep_csv_shape(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("variant = ks-qubit\nn_samples = 2000\nseed = 5\n")
    out = tmp_path / "sweep.csv"
    rc = main(["born-sweep", "--config", str(cfg_file), "--out", str(out)])
    assert rc == 0
    rows = read_csv(out)
    assert tuple(rows[0]) == CSV_HEADER
    assert len(rows) == 1 + 19 * 2
    manifest = (tmp_path / "sweep.csv.manifest.txt").read_text()
    assert "seed = 5" in manifest
    assert "version =" in manifest and "wall_time_s" in manifest


def test_csv_byte_determinism(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("variant = linear-trace\nn_samples = 3000\nseed = 2\ntheta_count = 5\n")
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["born-sweep", "--config", str(cfg_file), "--out", str(out1)]) == 0
    assert main(["born-sweep", "--config", str(cfg_file), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_exit_codes_subprocess(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("variant = ks-qubit\n")  # n_samples missing
    proc = run_cli(["born-sweep", "--config", str(cfg)])
    assert proc.returncode == 2
    assert "n_samples" in proc.stderr

    cfg.write_text("variant = ks-qubit\nn_samples = 100\nwhatever = 1\n")
    proc = run_cli(["born-sweep", "--config", str(cfg)])
    assert proc.returncode == 2
    assert "whatever" in proc.stderr


def test_env_seed_subprocess(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("variant = ks-qubit\nn_samples = 500\ntheta_count = 3\n")
    out = tmp_path / "env.csv"
    proc = run_cli(["born-sweep", "--config", str(cfg), "--out", str(out)],
                   env_extra={"ONTOLAB_SEED": "123"})
    assert proc.returncode == 0
    rows = read_csv(out)
    assert rows[1][-1] == "123"


def test_marble_check_run(tmp_path):
    cfg = tmp_path / "m.cfg"
    cfg.write_text("n_samples = 2000\nseed = 1\ntheta_count = 4\ntheta_stop = 1.178\n")
    out = tmp_path / "marble.csv"
    assert main(["marble-check", "--config", str(cfg), "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 1 + 4 * 2
    assert rows[1][1] == "marble-world:2x2"


def test_contextuality_and_repeatability_rows(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("variant = linear-trace\nn_samples = 2000\nn_contexts = 50\nseed = 4\n")
    out = tmp_path / "ctx.csv"
    assert main(["contextuality", "--config", str(cfg), "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 3  # header + sampled + analytic

    cfg = tmp_path / "r.cfg"
    cfg.write_text("variant = linear-trace\nn_samples = 1000\nupdate = collapse\n"
                   "theta = 0.785\nseed = 4\n")
    out = tmp_path / "rep.csv"
    assert main(["repeatability", "--config", str(cfg), "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 2
    assert rows[1][4] == "-1" and rows[1][5] == "1"


def test_sequential_run_cli(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("variant = linear-trace\nn_samples = 1000\nupdate = bayes\n"
                   "theta = 0.5\nchain = comp,rot:0.6,comp\nseed = 6\n")
    out = tmp_path / "seq.csv"
    assert main(["sequential", "--config", str(cfg), "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 1 + 3 * 3
    manifest = (tmp_path / "seq.csv.manifest.txt").read_text()
    assert "agreement[0,2]" in manifest


def test_delta_opt_cli(tmp_path):
    cfg = tmp_path / "d.cfg"
    cfg.write_text("variant = linear-trace\nn_samples = 2000\ntheta_count = 5\n"
                   "delta_grid = 0.45,0.577,0.7\nseed = 8\n")
    out = tmp_path / "opt.csv"
    assert main(["delta-opt", "--config", str(cfg), "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 1 + 3 * 5 * 3
    manifest = (tmp_path / "opt.csv.manifest.txt").read_text()
    assert "best_delta" in manifest


def test_flags_without_config_file(tmp_path):
    # flags alone cannot name a variant, so this is a config error
    out = tmp_path / "x.csv"
    rc = main(["born-sweep", "--out", str(out), "--n-samples", "10"])
    assert rc == 2
