"""Epistemic density families over the ontic space.

Every density here is a function of the single scalar t = overlap(lambda,
center), which reduces all normalization and marginal computations to 1-D
integrals against the Haar overlap marginal (D-1)(1-t)^(D-2).  That
reduction is the central implementation device and is itself validated
against raw Haar sampling in the test suite.

Two exact samplers are provided per model: rejection from the Haar measure,
and a conditional two-stage construction (draw t by inverse CDF, then a
Haar direction in the orthogonal complement of the center).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionMismatchError, EmptySupportError
from .states import PureState, overlap

VARIANTS = ("ks-qubit", "marble-world", "linear-trace", "uniform-embedded")

#: weight(t) shape per variant: "linear" is max(t - delta, 0), "uniform" the
#: indicator of t >= delta.  marble-world shares the qubit linear weight with
#: the printed factor two.
_LINEAR = {"ks-qubit", "marble-world", "linear-trace"}

DEFAULT_DELTA = {
    "ks-qubit": 0.5,
    "marble-world": 0.5,
    "linear-trace": 1.0 / np.sqrt(3.0),
    "uniform-embedded": 0.5,
}


@dataclass(frozen=True)
class ModelSpec:
    """An ontological model: variant, system dim d, ontic dim D, support cutoff delta."""

    variant: str
    system_dim: int
    ontic_dim: int
    delta: float

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"delta must lie in [0, 1), got {self.delta}")
        d, big_d = self.system_dim, self.ontic_dim
        if self.variant == "ks-qubit":
            if (d, big_d) != (2, 2):
                raise ValueError("ks-qubit requires d = D = 2")
            if self.delta != 0.5:
                raise ValueError("ks-qubit has delta fixed at 1/2")
        elif self.variant == "marble-world":
            if (d, big_d) != (2, 2):
                raise ValueError("marble-world requires d = 2 (ontic space: the real 2-sphere)")
            if self.delta != 0.5:
                raise ValueError("marble-world has delta fixed at 1/2")
        elif self.variant == "linear-trace":
            if d != big_d:
                raise ValueError("linear-trace requires d = D")
        elif self.variant == "uniform-embedded":
            if big_d != d + 1:
                raise ValueError("uniform-embedded requires D = d + 1")
        if not (2 <= d <= big_d <= 8):
            raise ValueError("dimensions must satisfy 2 <= d <= D <= 8")

    def with_delta(self, delta: float) -> "ModelSpec":
        """Same geometry with a different support cutoff.

        The fixed-delta qubit variants re-open as the equivalent linear-trace
        family so that delta sweeps over qubit models are expressible.
        """
        if self.variant in ("ks-qubit", "marble-world") and delta != 0.5:
            return ModelSpec("linear-trace", 2, 2, delta)
        return replace(self, delta=delta)

    def to_fragment(self) -> str:
        """Serialize as the plain-text key=value fragment used by configs."""
        return (
            f"variant = {self.variant}\n"
            f"d = {self.system_dim}\n"
            f"D = {self.ontic_dim}\n"
            f"delta = {self.delta!r}\n"
        )


def model_from_fragment(text: str) -> ModelSpec:
    """Parse the key=value fragment produced by ModelSpec.to_fragment."""
    fields = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    try:
        variant = fields["variant"]
    except KeyError:
        raise ValueError("model fragment is missing 'variant'") from None
    return make_model(
        variant,
        system_dim=int(fields["d"]) if "d" in fields else None,
        ontic_dim=int(fields["D"]) if "D" in fields else None,
        delta=float(fields["delta"]) if "delta" in fields else None,
    )


def make_model(variant: str, system_dim: int | None = None, ontic_dim: int | None = None,
               delta: float | None = None) -> ModelSpec:
    """ModelSpec factory applying per-variant defaults."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if system_dim is None:
        system_dim = 3 if variant == "linear-trace" else 2
    if ontic_dim is None:
        ontic_dim = system_dim + 1 if variant == "uniform-embedded" else system_dim
    if delta is None:
        delta = DEFAULT_DELTA[variant]
    return ModelSpec(variant, system_dim, ontic_dim, float(delta))


def weight(model: ModelSpec, t):
    """Unnormalized density value as a function of the overlap t in [0, 1].

    Accepts scalars or arrays.
    """
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < -1e-12) or np.any(t > 1 + 1e-12):
        raise ValueError("overlap t must lie in [0, 1]")
    if model.variant == "marble-world":
        w = np.maximum(2.0 * t - 1.0, 0.0)
    elif model.variant in _LINEAR:
        w = np.maximum(t - model.delta, 0.0)
    else:
        w = (t >= model.delta).astype(np.float64)
    return w if w.ndim else float(w)


def weight_max(model: ModelSpec) -> float:
    """Supremum of weight(t) over [0, 1]; rejection-sampler envelope height."""
    if model.variant == "marble-world":
        return 1.0
    if model.variant in _LINEAR:
        return 1.0 - model.delta
    return 1.0


def overlap_marginal_pdf(ontic_dim: int, t):
    """Density of the overlap with a fixed state under Haar sampling in dimension D."""
    t = np.asarray(t, dtype=np.float64)
    out = (ontic_dim - 1) * (1.0 - t) ** (ontic_dim - 2)
    return out if out.ndim else float(out)


def overlap_marginal_cdf(ontic_dim: int, t):
    """CDF of the Haar overlap marginal: 1 - (1-t)^(D-1)."""
    t = np.asarray(t, dtype=np.float64)
    out = 1.0 - (1.0 - t) ** (ontic_dim - 1)
    return out if out.ndim else float(out)


def normalization(model: ModelSpec) -> float:
    """N with integral of N * weight(t) * marginal(t) over [0, 1] equal to 1.

    Closed forms; every supported variant reduces to one of two 1-D
    integrals against the Haar marginal.  The marble-world reference
    measure is uniform in t = (lam . n)^2, the same marginal as D = 2.
    """
    d_eff = 2 if model.variant == "marble-world" else model.ontic_dim
    rem = 1.0 - model.delta
    if rem <= 0.0:
        raise EmptySupportError("support cutoff delta >= 1 leaves no mass")
    if model.variant == "marble-world":
        # integral of (2t-1) over [1/2, 1] = 1/4
        return 4.0
    if model.variant in _LINEAR:
        # integral of (t-delta)(D-1)(1-t)^(D-2) over [delta, 1] = (1-delta)^D / D
        return d_eff / rem**d_eff
    # uniform weight: integral of the marginal over [delta, 1] = (1-delta)^(D-1)
    return rem ** -(d_eff - 1)


@dataclass(frozen=True, eq=False)
class EpistemicState:
    """A normalized density over the ontic space: a model plus a center state."""

    model: ModelSpec
    center: PureState
    norm_const: float = 0.0

    def __post_init__(self):
        if self.model.variant == "marble-world":
            raise ValueError("marble-world densities live on the real sphere; see ontolab.marble")
        if self.center.dim != self.model.ontic_dim:
            raise DimensionMismatchError(
                f"center dim {self.center.dim} != ontic dim {self.model.ontic_dim}"
            )
        object.__setattr__(self, "norm_const", normalization(self.model))


def density_at(state: EpistemicState, lam: PureState) -> float:
    """The normalized density value at an ontic point."""
    if lam.dim != state.center.dim:
        raise DimensionMismatchError(f"point dim {lam.dim} != center dim {state.center.dim}")
    return state.norm_const * weight(state.model, overlap(lam, state.center))


def overlap_pdf(model: ModelSpec, t):
    """Density of t = overlap(lambda, center) under the model: N * weight * marginal."""
    d_eff = 2 if model.variant == "marble-world" else model.ontic_dim
    return normalization(model) * weight(model, t) * overlap_marginal_pdf(d_eff, t)


def _inverse_smoothstep(u: np.ndarray) -> np.ndarray:
    # inverse of F(v) = 3v^2 - 2v^3 on [0, 1]
    return 0.5 - np.sin(np.arcsin(1.0 - 2.0 * u) / 3.0)


def _linear_cdf(v: np.ndarray, big_d: int) -> np.ndarray:
    # CDF of Beta(2, D-1): the rescaled t-law for linear weights
    return 1.0 - (1.0 - v) ** (big_d - 1) * (1.0 + (big_d - 1) * v)


def _bisect_linear(u: np.ndarray, big_d: int) -> np.ndarray:
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    for _ in range(64):  # 2^-64 < 1e-12 interval width
        mid = 0.5 * (lo + hi)
        below = _linear_cdf(mid, big_d) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def draw_overlap(model: ModelSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """Exact inverse-CDF draws of t = overlap(lambda, center) under the model."""
    d_eff = 2 if model.variant == "marble-world" else model.ontic_dim
    u = rng.random(size)
    if model.variant not in _LINEAR:
        v = 1.0 - (1.0 - u) ** (1.0 / (d_eff - 1))
    elif d_eff == 2:
        v = np.sqrt(u)
    elif d_eff == 3:
        v = _inverse_smoothstep(u)
    else:
        v = _bisect_linear(u, d_eff)
    return model.delta + (1.0 - model.delta) * v


def _complement_directions(center: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit rows orthogonal to center, shape (n, D)."""
    dim = center.size
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    z -= np.outer(z @ center.conj(), center)
    norms = np.linalg.norm(z, axis=1)
    bad = norms < 1e-12
    while np.any(bad):  # astronomically rare; redraw the degenerate rows
        k = int(bad.sum())
        z[bad] = rng.standard_normal((k, dim)) + 1j * rng.standard_normal((k, dim))
        z[bad] -= np.outer(z[bad] @ center.conj(), center)
        norms = np.linalg.norm(z, axis=1)
        bad = norms < 1e-12
    return z / norms[:, None]


def sample_conditional_matrix(state: EpistemicState, n: int, rng: np.random.Generator) -> np.ndarray:
    """n exact samples as raw amplitude rows, shape (n, D).

    Two stages: t by inverse CDF, then sqrt(t)*center + sqrt(1-t)*eta with
    eta Haar in the orthogonal complement of the center.
    """
    t = draw_overlap(state.model, rng, n)
    eta = _complement_directions(state.center.amplitudes, n, rng)
    return np.sqrt(t)[:, None] * state.center.amplitudes + np.sqrt(1.0 - t)[:, None] * eta


def sample_conditional(state: EpistemicState, rng: np.random.Generator) -> PureState:
    """One exact sample via the two-stage conditional construction."""
    return PureState(sample_conditional_matrix(state, 1, rng)[0])


def sample_rejection_matrix(state: EpistemicState, n: int, rng: np.random.Generator) -> np.ndarray:
    """n exact samples by rejection from Haar, shape (n, D)."""
    model = state.model
    big_d = model.ontic_dim
    w_max = weight_max(model)
    center = state.center.amplitudes
    # mean acceptance = (integral of weight * marginal) / w_max
    accept = 1.0 / (normalization(model) * w_max)
    out = np.empty((n, big_d), dtype=np.complex128)
    filled = 0
    while filled < n:
        want = n - filled
        m = max(int(want / accept * 1.2) + 16, 64)
        z = rng.standard_normal((m, big_d)) + 1j * rng.standard_normal((m, big_d))
        z /= np.linalg.norm(z, axis=1)[:, None]
        t = np.abs(z @ center.conj()) ** 2
        keep = rng.random(m) * w_max < weight(model, t)
        kept = z[keep][:want]
        out[filled : filled + kept.shape[0]] = kept
        filled += kept.shape[0]
    return out


def sample_rejection(state: EpistemicState, rng: np.random.Generator) -> PureState:
    """One exact sample by rejection from the Haar measure."""
    return PureState(sample_rejection_matrix(state, 1, rng)[0])
