"""Pure states, unitaries and measurement contexts in small complex dimensions.

States are unit complex vectors with a canonical global phase, doubling as
points of the ontic space and as quantum states.  All sampling follows the
unitarily invariant (Haar) measure.  Dimensions are bounded to 2..8; the
models in this package use 2, 3 and 4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ZeroVectorError

DIM_MIN = 2
DIM_MAX = 8

NORM_TOL = 1e-12
ORTHO_TOL = 1e-10


def _canonical(amplitudes: np.ndarray) -> np.ndarray:
    """Normalize and fix the global phase of a complex vector.

    The component of largest magnitude (lowest index on ties) is made real
    and nonnegative.  Idempotent: a vector already in canonical form is
    returned unchanged bit for bit, which keeps serialization stable.
    """
    a = np.array(amplitudes, dtype=np.complex128)
    if a.ndim != 1:
        raise ValueError("state amplitudes must be a 1-D vector")
    norm = np.linalg.norm(a)
    if norm < 1e-14:
        raise ZeroVectorError("cannot normalize a zero vector")
    if abs(norm - 1.0) > NORM_TOL:
        a /= norm
    pivot = int(np.argmax(np.abs(a)))
    z = a[pivot]
    if z.imag != 0.0 or z.real < 0.0:
        a *= np.conj(z) / abs(z)
        a[pivot] = abs(z)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """A unit vector in C^dim with canonical global phase."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = _canonical(self.amplitudes)
        if not (DIM_MIN <= a.size <= DIM_MAX):
            raise ValueError(f"dimension {a.size} outside supported range {DIM_MIN}..{DIM_MAX}")
        a.flags.writeable = False
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class Unitary:
    """A dim x dim unitary matrix (checked to 1e-10 entrywise)."""

    entries: np.ndarray

    def __post_init__(self):
        u = np.array(self.entries, dtype=np.complex128)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError("unitary must be a square matrix")
        dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
        if dev > ORTHO_TOL:
            raise ValueError(f"matrix is not unitary (max |U^dag U - I| = {dev:.3e})")
        u.flags.writeable = False
        object.__setattr__(self, "entries", u)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class Context:
    """An ordered set of d mutually orthogonal states embedded in dimension D.

    Outcome indices always refer to positions in ``elements``.
    """

    system_dim: int
    ontic_dim: int
    elements: tuple

    def __post_init__(self):
        d, big_d = self.system_dim, self.ontic_dim
        if not (DIM_MIN <= d <= big_d <= DIM_MAX):
            raise ValueError(f"need {DIM_MIN} <= system_dim <= ontic_dim <= {DIM_MAX}")
        if len(self.elements) != d:
            raise ValueError(f"expected {d} elements, got {len(self.elements)}")
        for e in self.elements:
            if e.dim != big_d:
                raise DimensionMismatchError("context element dimension != ontic_dim")
        mat = element_matrix(self)
        gram = np.abs(mat @ mat.conj().T) ** 2
        off = gram - np.diag(np.diag(gram))
        if np.max(off) > ORTHO_TOL:
            raise ValueError("context elements are not pairwise orthogonal")
        object.__setattr__(self, "elements", tuple(self.elements))


@dataclass(frozen=True, eq=False)
class RealSphereState:
    """A unit vector on the real 2-sphere (the marble-world ontic space)."""

    vector: np.ndarray

    def __post_init__(self):
        v = np.array(self.vector, dtype=np.float64)
        if v.shape != (3,):
            raise ValueError("sphere state must be a real 3-vector")
        norm = np.linalg.norm(v)
        if norm < 1e-14:
            raise ZeroVectorError("cannot normalize a zero vector")
        if abs(norm - 1.0) > NORM_TOL:
            v /= norm
        v.flags.writeable = False
        object.__setattr__(self, "vector", v)


def make_pure_state(amplitudes) -> PureState:
    """Build a canonical PureState from any nonzero complex vector."""
    return PureState(np.asarray(amplitudes, dtype=np.complex128))


def overlap(a: PureState, b: PureState) -> float:
    """Squared fidelity |<a|b>|^2, the trace overlap of the two projectors."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"overlap between dim {a.dim} and dim {b.dim}")
    return float(np.abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def distance(a: PureState, b: PureState) -> float:
    """1 - overlap(a, b); zero for identical states, one for orthogonal ones."""
    return 1.0 - overlap(a, b)


def haar_state(dim: int, rng: np.random.Generator) -> PureState:
    """Draw a state from the unitarily invariant measure on pure states."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(z)


def haar_states_matrix(dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """n Haar-random unit rows, shape (n, dim). Rows are NOT phase-canonicalized."""
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    z /= np.linalg.norm(z, axis=1)[:, None]
    return z


def haar_unitary(dim: int, rng: np.random.Generator) -> Unitary:
    """Haar-random unitary via QR of a Ginibre matrix with phase-fixed diagonal."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r).copy()
    ph /= np.abs(ph)
    return Unitary(q * ph)


def haar_unitaries_stack(dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """n Haar-random unitaries, shape (n, dim, dim), as raw arrays."""
    z = (rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.einsum("nii->ni", r).copy()
    ph /= np.abs(ph)
    return q * ph[:, None, :]


def embed(state: PureState, target_dim: int) -> PureState:
    """Pad a state with zeros up to target_dim; overlaps are preserved."""
    if target_dim < state.dim:
        raise DimensionMismatchError(f"cannot embed dim {state.dim} into dim {target_dim}")
    if target_dim == state.dim:
        return state
    padded = np.zeros(target_dim, dtype=np.complex128)
    padded[: state.dim] = state.amplitudes
    return PureState(padded)


def haar_context(system_dim: int, ontic_dim: int, rng: np.random.Generator) -> Context:
    """A Haar-random orthonormal d-tuple, embedded into dimension ontic_dim."""
    if not (DIM_MIN <= system_dim <= ontic_dim):
        raise ValueError("need 2 <= system_dim <= ontic_dim")
    u = haar_unitary(system_dim, rng)
    elements = [embed(PureState(u.entries[:, k]), ontic_dim) for k in range(system_dim)]
    return Context(system_dim, ontic_dim, tuple(elements))


def computational_context(system_dim: int, ontic_dim: int) -> Context:
    """The coordinate-basis context {|0>, ..., |d-1>} embedded into ontic_dim."""
    eye = np.eye(ontic_dim, dtype=np.complex128)
    elements = tuple(PureState(eye[k]) for k in range(system_dim))
    return Context(system_dim, ontic_dim, elements)


def apply_unitary(u: Unitary, s: PureState) -> PureState:
    """U|s>, re-canonicalized."""
    if u.dim != s.dim:
        raise DimensionMismatchError(f"unitary dim {u.dim} vs state dim {s.dim}")
    return PureState(u.entries @ s.amplitudes)


def rotate_context(u: Unitary, c: Context) -> Context:
    """Apply a unitary to every element of a context."""
    if u.dim != c.ontic_dim:
        raise DimensionMismatchError(f"unitary dim {u.dim} vs context ontic dim {c.ontic_dim}")
    return Context(c.system_dim, c.ontic_dim, tuple(apply_unitary(u, e) for e in c.elements))


def element_matrix(c: Context) -> np.ndarray:
    """Context elements stacked as rows, shape (d, D)."""
    return np.vstack([e.amplitudes for e in c.elements])


def complement_basis(axis: PureState) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of axis, shape (D, D-1).

    Deterministic: QR of [axis | identity] with the axis as first column.
    """
    d = axis.dim
    m = np.empty((d, d + 1), dtype=np.complex128)
    m[:, 0] = axis.amplitudes
    m[:, 1:] = np.eye(d)
    q, _ = np.linalg.qr(m)
    return q[:, 1:d]


def unitary_fixing_axis(axis: PureState, rng: np.random.Generator | None = None,
                        angle: float | None = None) -> Unitary:
    """A unitary leaving ``axis`` fixed and rotating its orthogonal complement.

    With ``rng`` the complement block is Haar-random; with ``angle`` it is a
    real rotation by that angle in the first two complement directions
    (requires dim >= 3).  Exactly one of the two must be given.
    """
    if (rng is None) == (angle is None):
        raise ValueError("pass exactly one of rng or angle")
    d = axis.dim
    comp = complement_basis(axis)
    if angle is not None:
        if d < 3:
            raise ValueError("angle form needs a complement of dimension >= 2")
        block = np.eye(d - 1, dtype=np.complex128)
        c, s = np.cos(angle), np.sin(angle)
        block[0, 0], block[0, 1], block[1, 0], block[1, 1] = c, -s, s, c
    else:
        block = haar_unitary(d - 1, rng).entries
    rotated = comp @ block
    u = np.outer(axis.amplitudes, axis.amplitudes.conj()) + rotated @ comp.conj().T
    return Unitary(u)
