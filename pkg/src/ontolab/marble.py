"""The marble-on-a-sphere qubit model.

A marble lives on the real 2-sphere; an observer's knowledge of its position
is the density 2(lam.n)^2 - 1 on the cap lam.n >= 1/sqrt(2) around the
preparation axis n.  The sphere double-covers the qubit state space: the
map B(v) = 2(v.p)v - p doubles polar angles about the reference pole p and
sends antipodes to the same point.  Outcomes are decided by the doubled
images, and the reference measure is the pullback of the qubit Haar measure
(t = (lam.n)^2 uniform on the hemisphere).  With these choices the green
outcome occurs with probability cos^2(alpha) for lights at angle alpha from
the preparation axis, matching the qubit model exactly under angle doubling.
"""

from __future__ import annotations

import numpy as np

from .states import RealSphereState

POLE = RealSphereState(np.array([0.0, 0.0, 1.0]))

GREEN = "green"
RED = "red"

_SUPPORT_COS = 1.0 / np.sqrt(2.0)


def sphere_point(theta: float, phi: float = 0.0) -> RealSphereState:
    """The sphere point at polar angle theta and azimuth phi."""
    return RealSphereState(
        np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    )


def double_cover_image(v: RealSphereState) -> np.ndarray:
    """B(v) = 2(v.p)v - p: doubles the polar angle about the pole; B(-v) = B(v)."""
    vec = v.vector
    return 2.0 * (vec @ POLE.vector) * vec - POLE.vector


def marble_density(n: RealSphereState, lam: RealSphereState) -> float:
    """Normalized density of the marble position given preparation axis n.

    2(lam.n)^2 - 1 on the cap lam.n >= 1/sqrt(2), zero outside, normalized
    against the doubled reference measure (factor 4).
    """
    c = float(lam.vector @ n.vector)
    if c < _SUPPORT_COS:
        return 0.0
    return 4.0 * (2.0 * c * c - 1.0)


def marble_outcome(lam: RealSphereState, m: RealSphereState) -> str:
    """Deterministic response to lights on the axis m: green or red.

    Green iff the doubled images of marble and light axis lie within a
    quarter turn: B(lam) . B(m) >= 0.
    """
    return GREEN if double_cover_image(lam) @ double_cover_image(m) >= 0.0 else RED


def _frame(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # deterministic orthonormal pair completing n
    seed = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = seed - (seed @ n) * n
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(n, e1)


def _assemble(n: RealSphereState, c: np.ndarray, phi: np.ndarray) -> np.ndarray:
    e1, e2 = _frame(n.vector)
    s = np.sqrt(1.0 - c * c)
    return (
        c[:, None] * n.vector
        + (s * np.cos(phi))[:, None] * e1
        + (s * np.sin(phi))[:, None] * e2
    )


def sample_conditional_matrix(n: RealSphereState, size: int, rng: np.random.Generator) -> np.ndarray:
    """Exact samples of the marble position, shape (size, 3): inverse-CDF draw
    of t = (lam.n)^2 followed by a uniform azimuth about n."""
    u = rng.random(size)
    t = 0.5 * (1.0 + np.sqrt(u))  # inverse of the (2t-1) CDF on [1/2, 1]
    return _assemble(n, np.sqrt(t), rng.random(size) * 2.0 * np.pi)


def sample_conditional(n: RealSphereState, rng: np.random.Generator) -> RealSphereState:
    return RealSphereState(sample_conditional_matrix(n, 1, rng)[0])


def sample_rejection_matrix(n: RealSphereState, size: int, rng: np.random.Generator) -> np.ndarray:
    """Exact samples by rejection from the reference measure (t uniform)."""
    out = np.empty((size, 3))
    filled = 0
    while filled < size:
        want = size - filled
        m = max(4 * want + 16, 64)  # mean acceptance is 1/4
        t = rng.random(m)
        phi = rng.random(m) * 2.0 * np.pi
        keep = rng.random(m) < np.maximum(2.0 * t - 1.0, 0.0)
        c = np.sqrt(t[keep][:want])
        kept_phi = phi[keep][:want]
        out[filled : filled + c.size] = _assemble(n, c, kept_phi)
        filled += c.size
    return out


def sample_rejection(n: RealSphereState, rng: np.random.Generator) -> RealSphereState:
    return RealSphereState(sample_rejection_matrix(n, 1, rng)[0])


def outcomes_matrix(lams: np.ndarray, m: RealSphereState) -> np.ndarray:
    """Vectorized response: True where green, for positions stacked as rows."""
    bm = double_cover_image(m)
    cp = lams @ POLE.vector
    # B(lam) . B(m) without materializing the images
    dots = 2.0 * cp * (lams @ bm) - (POLE.vector @ bm)
    return dots >= 0.0
