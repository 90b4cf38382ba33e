"""Figure builders over the experiment CSV contract.

The renderer consumes only CSVs with the stable schema

    experiment,model,delta,theta,outcome,qm_prob,om_prob,std_err,n_samples,seed

and never recomputes simulation results: every number drawn comes straight
from the file (the delta-objective kind aggregates rows by max, nothing
more).  Output is deterministic: fixed color cycle, fixed SVG hash salt,
no timestamps in image metadata.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "omrender"

import matplotlib.pyplot as plt

SCHEMA = ("experiment", "model", "delta", "theta", "outcome",
          "qm_prob", "om_prob", "std_err", "n_samples", "seed")

KINDS = ("sweep-comparison", "delta-objective", "region-sketch")

#: fixed outcome -> color mapping; index beyond the cycle wraps
COLORS = ("tab:red", "tab:green", "tab:blue", "tab:orange", "tab:purple")


class SchemaError(ValueError):
    """Input file does not conform to the experiment CSV schema."""


@dataclass(frozen=True)
class Row:
    experiment: str
    model: str
    delta: float
    theta: float
    outcome: int
    qm_prob: float
    om_prob: float
    std_err: float


@dataclass(frozen=True)
class FigureSpec:
    csv_paths: tuple
    kind: str
    out_path: str
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.csv_paths:
            raise SchemaError("no input CSV given")


def read_rows(path) -> list[Row]:
    """Load and validate one experiment CSV; empty data is an error."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise SchemaError(f"{path}: file is empty") from None
        if header != SCHEMA:
            missing = [c for c in SCHEMA if c not in header]
            raise SchemaError(f"{path}: header mismatch (missing columns: {missing or 'none'}, "
                              f"got {list(header)})")
        rows = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(SCHEMA):
                raise SchemaError(f"{path}: line {lineno} has {len(record)} fields")
            try:
                rows.append(Row(
                    experiment=record[0], model=record[1],
                    delta=float(record[2]), theta=float(record[3]),
                    outcome=int(record[4]), qm_prob=float(record[5]),
                    om_prob=float(record[6]), std_err=float(record[7]),
                ))
            except ValueError as exc:
                raise SchemaError(f"{path}: line {lineno}: {exc}") from None
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _color(outcome: int) -> str:
    return COLORS[outcome % len(COLORS)]


def _draw_sweep(ax, rows: list[Row], label: str):
    outcomes = sorted({r.outcome for r in rows})
    for outcome in outcomes:
        series = sorted((r for r in rows if r.outcome == outcome), key=lambda r: r.theta)
        theta = [r.theta for r in series]
        ax.plot(theta, [r.qm_prob for r in series], "-", color="black", linewidth=1.0,
                label="QM" if outcome == outcomes[0] else None)
        ax.errorbar(theta, [r.om_prob for r in series], yerr=[r.std_err for r in series],
                    fmt="x", color=_color(outcome), elinewidth=0.8, capsize=2,
                    label=f"outcome {outcome}")
    ax.set_xlabel("theta [rad]")
    ax.set_ylabel("outcome probability")
    ax.set_title(label)
    ax.legend(loc="center right", fontsize="small")


def _draw_delta_objective(ax, rows: list[Row], label: str):
    deltas = sorted({r.delta for r in rows})
    scores = [max(abs(r.om_prob - r.qm_prob) for r in rows if r.delta == d) for d in deltas]
    ax.plot(deltas, scores, "o-", label=label)
    ax.set_xlabel("support cutoff delta")
    ax.set_ylabel("max |om - qm| over sweep")
    ax.legend(fontsize="small")


def _draw_region_sketch(ax, rows: list[Row], label: str):
    delta = rows[0].delta
    ax.axhspan(0.5, 1.0, color="tab:green", alpha=0.15)
    ax.axhline(0.5, color="tab:red", linewidth=1.2)
    ax.axhline(delta, color="tab:blue", linestyle="--", linewidth=1.2)
    ax.text(0.02, 0.75, "faithful: always the same outcome", fontsize="small")
    ax.text(0.02, min(delta, 0.5) / 2, "answers depend on the context", fontsize="small")
    ax.text(0.62, delta + 0.02, f"support boundary (delta = {delta:g})",
            fontsize="small", color="tab:blue")
    sampled = [r.om_prob for r in rows if r.outcome == 0]
    analytic = [r.om_prob for r in rows if r.outcome == 1]
    note = []
    if sampled:
        note.append(f"measured unfaithful fraction: {sampled[0]:g}")
    if analytic:
        note.append(f"analytic fraction: {analytic[0]:g}")
    ax.text(0.02, 0.54, "; ".join(note), fontsize="small")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_xlabel("context rotation angle / pi")
    ax.set_ylabel("overlap with the shared element")
    ax.set_title(label)


def build_figure(spec: FigureSpec):
    """Build the matplotlib figure for a spec; returns (figure, rows per file)."""
    per_file = [(Path(p), read_rows(p)) for p in spec.csv_paths]
    n = len(per_file)
    if spec.kind == "delta-objective":
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        for path, rows in per_file:
            _draw_delta_objective(ax, rows, path.stem)
        if spec.title:
            ax.set_title(spec.title)
    else:
        fig, axes = plt.subplots(n, 1, figsize=(6.0, 4.0 * n), squeeze=False)
        for ax, (path, rows) in zip(axes[:, 0], per_file):
            label = spec.title if (spec.title and n == 1) else path.stem
            if spec.kind == "sweep-comparison":
                _draw_sweep(ax, rows, label)
            else:
                _draw_region_sketch(ax, rows, label)
    fig.tight_layout()
    return fig, [rows for _, rows in per_file]


def render(spec: FigureSpec) -> str:
    """Render a spec to its output file (vector SVG); returns the path."""
    fig, _ = build_figure(spec)
    try:
        fig.savefig(spec.out_path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return spec.out_path
