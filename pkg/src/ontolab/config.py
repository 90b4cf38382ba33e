"""Experiment configuration: plain-text key=value files plus flag overrides.

The file format is line oriented, ``key = value`` with ``#`` comments.
Validation is fail-fast and per experiment: unknown keys are rejected and
every numeric field is range-checked before any computation starts.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .models import ModelSpec, make_model

EXPERIMENTS = (
    "born-sweep",
    "delta-opt",
    "contextuality",
    "repeatability",
    "sequential",
    "marble-check",
)

_MODEL_KEYS = {"variant", "d", "D", "delta"}
_COMMON_KEYS = {"n_samples", "seed", "n_workers", "out"}
_GRID_KEYS = {"theta_start", "theta_stop", "theta_count"}

ALLOWED_KEYS = {
    "born-sweep": _MODEL_KEYS | _COMMON_KEYS | _GRID_KEYS,
    "delta-opt": _MODEL_KEYS | _COMMON_KEYS | _GRID_KEYS | {"delta_grid"},
    "contextuality": _MODEL_KEYS | _COMMON_KEYS | {"n_contexts", "sampling_law"},
    "repeatability": _MODEL_KEYS | _COMMON_KEYS | {"update", "theta"},
    "sequential": _MODEL_KEYS | _COMMON_KEYS | {"update", "theta", "chain"},
    "marble-check": _MODEL_KEYS | _COMMON_KEYS | _GRID_KEYS,
}

SEED_ENV_VAR = "ONTOLAB_SEED"


class ConfigError(ValueError):
    """A configuration problem; the message always names the offending key."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully resolved, validated experiment description."""

    experiment: str
    model: ModelSpec
    n_samples: int
    seed: int
    n_workers: int
    out: str
    theta_grid: tuple = ()
    delta_grid: tuple = ()
    n_contexts: int = 1000
    sampling_law: str = "haar"
    update: str = "collapse"
    theta: float = 0.0
    chain: tuple = ()
    raw: dict = field(default_factory=dict, compare=False)


def parse_config_text(text: str) -> dict[str, str]:
    """Parse key=value lines; '#' starts a comment, blank lines are skipped."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(stripped.split()[0], f"line {lineno} is not of the form key = value")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key in out:
            raise ConfigError(key, "duplicate key")
        out[key] = value
    return out


def _as_int(raw: dict, key: str, default=None, minimum=None):
    if key not in raw:
        if default is None:
            raise ConfigError(key, "required key is missing")
        return default
    try:
        value = int(raw[key])
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {raw[key]!r}") from None
    if minimum is not None and value < minimum:
        raise ConfigError(key, f"must be >= {minimum}, got {value}")
    return value


def _as_float(raw: dict, key: str, default=None, lo=None, hi=None):
    if key not in raw:
        if default is None:
            raise ConfigError(key, "required key is missing")
        return default
    try:
        value = float(raw[key])
    except ValueError:
        raise ConfigError(key, f"expected a number, got {raw[key]!r}") from None
    if lo is not None and value < lo:
        raise ConfigError(key, f"must be >= {lo}, got {value}")
    if hi is not None and value >= hi:
        raise ConfigError(key, f"must be < {hi}, got {value}")
    return value


def _theta_grid(raw: dict) -> tuple:
    start = _as_float(raw, "theta_start", default=0.0)
    stop = _as_float(raw, "theta_stop", default=float(np.pi / 2))
    count = _as_int(raw, "theta_count", default=19, minimum=1)
    if stop < start:
        raise ConfigError("theta_stop", "must not be below theta_start")
    return tuple(np.linspace(start, stop, count))


def _model(raw: dict, experiment: str) -> ModelSpec:
    if experiment == "marble-check":
        variant = raw.get("variant", "marble-world")
        if variant != "marble-world":
            raise ConfigError("variant", "marble-check runs the marble-world variant only")
    else:
        if "variant" not in raw:
            raise ConfigError("variant", "required key is missing")
        variant = raw["variant"]
    d = _as_int(raw, "d", default=0, minimum=1) if "d" in raw else None
    big_d = _as_int(raw, "D", default=0, minimum=1) if "D" in raw else None
    delta = _as_float(raw, "delta", default=0.0, lo=0.0, hi=1.0) if "delta" in raw else None
    try:
        return make_model(variant, d, big_d, delta)
    except ValueError as exc:
        key = "variant" if "variant" in str(exc) else "delta" if "delta" in str(exc) else "d"
        raise ConfigError(key, str(exc)) from None


def resolve(experiment: str, file_values: dict[str, str], flag_values: dict[str, str],
            env: dict[str, str] | None = None) -> ExperimentConfig:
    """Merge config sources (flags beat file beats environment) and validate."""
    if experiment not in EXPERIMENTS:
        raise ConfigError("experiment", f"unknown experiment {experiment!r}")
    env = os.environ if env is None else env

    raw = dict(file_values)
    for key, value in flag_values.items():
        if value is not None:
            raw[key] = str(value)
    if "seed" not in raw and SEED_ENV_VAR in env:
        raw["seed"] = env[SEED_ENV_VAR]

    allowed = ALLOWED_KEYS[experiment]
    for key in raw:
        if key not in allowed:
            raise ConfigError(key, f"unknown key for experiment {experiment!r}")

    model = _model(raw, experiment)
    n_samples = _as_int(raw, "n_samples", minimum=1)
    seed = _as_int(raw, "seed", default=0, minimum=0)
    n_workers = _as_int(raw, "n_workers", default=1, minimum=1)
    out = raw.get("out", f"{experiment}.csv")

    kwargs: dict = {}
    if experiment in ("born-sweep", "delta-opt", "marble-check"):
        kwargs["theta_grid"] = _theta_grid(raw)
    if experiment == "delta-opt":
        if "delta_grid" not in raw:
            raise ConfigError("delta_grid", "required key is missing")
        try:
            grid = tuple(float(x) for x in raw["delta_grid"].split(","))
        except ValueError:
            raise ConfigError("delta_grid", "expected comma-separated numbers") from None
        if not grid or any(not 0.0 <= g < 1.0 for g in grid):
            raise ConfigError("delta_grid", "values must lie in [0, 1)")
        kwargs["delta_grid"] = grid
    if experiment == "contextuality":
        kwargs["n_contexts"] = _as_int(raw, "n_contexts", default=1000, minimum=1)
        law = raw.get("sampling_law", "haar")
        if law not in ("haar", "epistemic"):
            raise ConfigError("sampling_law", "must be 'haar' or 'epistemic'")
        kwargs["sampling_law"] = law
    if experiment in ("repeatability", "sequential"):
        update = raw.get("update", "collapse")
        if update not in ("collapse", "bayes"):
            raise ConfigError("update", "must be 'collapse' or 'bayes'")
        kwargs["update"] = update
        kwargs["theta"] = _as_float(raw, "theta", default=0.0)
    if experiment == "sequential":
        if "chain" not in raw:
            raise ConfigError("chain", "required key is missing")
        chain = tuple(tok.strip() for tok in raw["chain"].split(",") if tok.strip())
        if not chain:
            raise ConfigError("chain", "chain must name at least one context")
        for tok in chain:
            if tok != "comp" and tok != "haar" and not tok.startswith("rot:"):
                raise ConfigError("chain", f"unknown context token {tok!r}")
            if tok.startswith("rot:"):
                try:
                    float(tok[4:])
                except ValueError:
                    raise ConfigError("chain", f"bad rotation angle in {tok!r}") from None
        kwargs["chain"] = chain

    return ExperimentConfig(
        experiment=experiment,
        model=model,
        n_samples=n_samples,
        seed=seed,
        n_workers=n_workers,
        out=out,
        raw=raw,
        **kwargs,
    )
