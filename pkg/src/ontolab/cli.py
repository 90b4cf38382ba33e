"""Command-line front door: one subcommand per experiment, CSV + manifest out.

Every run writes a results CSV with the stable header
``experiment,model,delta,theta,outcome,qm_prob,om_prob,std_err,n_samples,seed``
(reals at 12 significant digits, LF line endings) and a ``.manifest.txt``
next to it recording the fully resolved configuration, seed, version and
wall time, so any output file is reproducible from its manifest.

Exit codes: 0 success, 2 configuration error, 3 runtime estimation error.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, engine
from .config import EXPERIMENTS, ConfigError, ExperimentConfig, parse_config_text, resolve
from .errors import OntolabError
from .measurement import base_context_containing
from .models import EpistemicState
from .states import Unitary, computational_context, haar_context, rotate_context
from .engine import Estimate, model_id, sweep_state

CSV_HEADER = ("experiment", "model", "delta", "theta", "outcome",
              "qm_prob", "om_prob", "std_err", "n_samples", "seed")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _row(cfg: ExperimentConfig, model: str, delta: float, theta: float, outcome: int,
         qm: float, est: Estimate) -> tuple:
    return (
        cfg.experiment, model, _fmt(delta), _fmt(theta), str(outcome),
        _fmt(qm), _fmt(est.mean), _fmt(est.std_error), str(est.n_samples), str(est.seed),
    )


def _plane_rotation(dim: int, angle: float) -> Unitary:
    """Real rotation by ``angle`` in the 0-1 coordinate plane of C^dim."""
    u = np.eye(dim, dtype=np.complex128)
    c, s = np.cos(angle), np.sin(angle)
    u[0, 0], u[0, 1], u[1, 0], u[1, 1] = c, -s, s, c
    return Unitary(u)


def _chain_contexts(cfg: ExperimentConfig):
    d, big_d = cfg.model.system_dim, cfg.model.ontic_dim
    base = computational_context(d, big_d)
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 0xC0)))
    out = []
    for tok in cfg.chain:
        if tok == "comp":
            out.append(base)
        elif tok == "haar":
            out.append(haar_context(d, big_d, rng))
        else:
            out.append(rotate_context(_plane_rotation(big_d, float(tok[4:])), base))
    return out


def _run_rows(cfg: ExperimentConfig) -> tuple[list[tuple], list[str]]:
    """Execute the experiment; returns CSV rows plus extra manifest lines."""
    notes: list[str] = []
    rows: list[tuple] = []
    mid = model_id(cfg.model)

    if cfg.experiment == "born-sweep":
        sweep = engine.deviation_sweep(cfg.model, cfg.theta_grid, cfg.n_samples,
                                       cfg.seed, cfg.n_workers)
        rows = [_row(cfg, r.model, r.delta, r.theta, r.outcome, r.qm_prob, r.om_estimate)
                for r in sweep.rows]
        notes.append(f"deviation_score = {_fmt(sweep.deviation_score)}")

    elif cfg.experiment == "delta-opt":
        result = engine.optimize_delta(cfg.model, cfg.delta_grid, cfg.theta_grid,
                                       cfg.n_samples, cfg.seed, cfg.n_workers)
        for dlt, _ in result.objective:
            for r in result.sweeps[dlt].rows:
                rows.append(_row(cfg, r.model, r.delta, r.theta, r.outcome,
                                 r.qm_prob, r.om_estimate))
        notes.append(f"best_delta = {_fmt(result.best_delta)}")
        for dlt, score in result.objective:
            notes.append(f"objective[{_fmt(dlt)}] = {_fmt(score)}")

    elif cfg.experiment == "contextuality":
        context = base_context_containing(
            computational_context(cfg.model.system_dim, cfg.model.ontic_dim).elements[0]
        )
        law = "haar" if cfg.sampling_law == "haar" else EpistemicState(cfg.model, context.elements[0])
        result = engine.unfaithful_fraction(context, law, cfg.n_samples, cfg.n_contexts,
                                            cfg.seed, cfg.n_workers)
        rows.append(_row(cfg, mid, cfg.model.delta, 0.0, 0, 0.0, result.sampled))
        rows.append(_row(cfg, mid, cfg.model.delta, 0.0, 1, 0.0, result.analytic))
        notes.append("row outcome 0: flip fraction under rotated contexts; "
                     "row outcome 1: analytic fraction (outcome 0 with overlap <= 1/2)")

    elif cfg.experiment == "repeatability":
        psi = sweep_state(cfg.theta, cfg.model.system_dim)
        context = computational_context(cfg.model.system_dim, cfg.model.ontic_dim)
        est = engine.repeatability_run(cfg.model, psi, context, cfg.update,
                                       cfg.n_samples, cfg.seed, cfg.n_workers)
        rows.append(_row(cfg, mid, cfg.model.delta, cfg.theta, -1, 1.0, est))
        notes.append(f"update = {cfg.update}; outcome -1 denotes the aggregate repeat frequency")

    elif cfg.experiment == "sequential":
        psi = sweep_state(cfg.theta, cfg.model.system_dim)
        contexts = _chain_contexts(cfg)
        result = engine.sequential_run(cfg.model, psi, contexts, cfg.update,
                                       cfg.n_samples, cfg.seed, cfg.n_workers)
        for step, (ests, qm) in enumerate(zip(result.step_estimates, result.qm_step_probs)):
            for outcome, est in enumerate(ests):
                rows.append(_row(cfg, mid, cfg.model.delta, float(step), outcome,
                                 float(qm[outcome]), est))
        notes.append("theta column holds the chain step index; qm_prob is the "
                     "projective-update prediction")
        for (a, b), est in sorted(result.agreement.items()):
            notes.append(
                f"agreement[{a},{b}] = {_fmt(est.mean)} (qm {_fmt(result.qm_agreement[(a, b)])})"
            )

    elif cfg.experiment == "marble-check":
        sweep = engine.marble_green_run(cfg.theta_grid, cfg.n_samples, cfg.seed, cfg.n_workers)
        rows = [_row(cfg, r.model, r.delta, r.theta, r.outcome, r.qm_prob, r.om_estimate)
                for r in sweep.rows]
        notes.append("theta column holds the light angle alpha; outcome 0 is green")

    return rows, notes


def run(cfg: ExperimentConfig) -> int:
    """Run a resolved experiment and write the CSV and manifest files."""
    started = time.perf_counter()
    rows, notes = _run_rows(cfg)

    out_path = Path(cfg.out)
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(rows)

    manifest = out_path.with_name(out_path.name + ".manifest.txt")
    wall = time.perf_counter() - started
    with open(manifest, "w", newline="") as fh:
        fh.write("# ontolab run manifest\n")
        fh.write(f"timestamp = {datetime.now(timezone.utc).isoformat()}\n")
        fh.write(f"wall_time_s = {wall:.3f}\n")
        fh.write(f"version = {__version__}\n")
        fh.write(f"experiment = {cfg.experiment}\n")
        fh.write(cfg.model.to_fragment())
        for key, value in _resolved_items(cfg, out_path):
            fh.write(f"{key} = {value}\n")
        for note in notes:
            fh.write(f"note: {note}\n")
    return 0


def _resolved_items(cfg: ExperimentConfig, out_path: Path):
    """Key=value pairs that reproduce the run when fed back as a config file."""
    items = [
        ("n_samples", cfg.n_samples),
        ("seed", cfg.seed),
        ("n_workers", cfg.n_workers),
        ("out", out_path),
    ]
    if cfg.theta_grid:
        items += [
            ("theta_start", _fmt(cfg.theta_grid[0])),
            ("theta_stop", _fmt(cfg.theta_grid[-1])),
            ("theta_count", len(cfg.theta_grid)),
        ]
    if cfg.delta_grid:
        items.append(("delta_grid", ",".join(_fmt(d) for d in cfg.delta_grid)))
    if cfg.experiment == "contextuality":
        items += [("n_contexts", cfg.n_contexts), ("sampling_law", cfg.sampling_law)]
    if cfg.experiment in ("repeatability", "sequential"):
        items += [("update", cfg.update), ("theta", _fmt(cfg.theta))]
    if cfg.chain:
        items.append(("chain", ",".join(cfg.chain)))
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontolab",
        description="Monte Carlo experiments on ontological qubit/qutrit models",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--n-samples", dest="n_samples", type=int, default=None)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--workers", dest="n_workers", type=int, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_values = {}
        if args.config is not None:
            try:
                text = Path(args.config).read_text()
            except OSError as exc:
                print(f"config error: config: {exc}", file=sys.stderr)
                return 2
            file_values = parse_config_text(text)
        flags = {
            "seed": args.seed,
            "n_samples": args.n_samples,
            "delta": args.delta,
            "out": args.out,
            "n_workers": args.n_workers,
        }
        cfg = resolve(args.experiment, file_values, flags)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(cfg)
    except (OntolabError, ValueError) as exc:
        print(f"estimation error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
