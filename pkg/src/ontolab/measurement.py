"""Deterministic response functions, post-measurement updates, faithfulness.

An ontic state responds to a measurement context by selecting the central
element it overlaps most (lowest index on ties, which are measure-zero for
every continuous distribution used here).  Two update rules are provided:
the model's own re-centering collapse, and the non-disturbing Bayesian
filter that conditions the prior density on the observed outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ZeroProbabilityOutcomeError
from .models import EpistemicState, ModelSpec, density_at, sample_conditional_matrix
from .states import (
    Context,
    PureState,
    complement_basis,
    element_matrix,
    haar_unitaries_stack,
    overlap,
)


def outcomes_matrix(samples: np.ndarray, elements: np.ndarray) -> np.ndarray:
    """Vectorized argmax response: samples (n, D) against elements (d, D)."""
    t = np.abs(samples @ elements.conj().T) ** 2
    return np.argmax(t, axis=1)


def outcome_of(lam: PureState, context: Context) -> int:
    """Index of the context element closest to lam (largest overlap)."""
    if lam.dim != context.ontic_dim:
        raise DimensionMismatchError(f"state dim {lam.dim} != context ontic dim {context.ontic_dim}")
    t = np.abs(element_matrix(context) @ lam.amplitudes.conj()) ** 2
    return int(np.argmax(t))


def characteristic(lam: PureState, context: Context, i: int) -> int:
    """1 iff lam yields outcome i under the context; the functions partition the space."""
    if not 0 <= i < context.system_dim:
        raise IndexError(f"outcome index {i} out of range for a {context.system_dim}-outcome context")
    return int(outcome_of(lam, context) == i)


def collapse_update(model: ModelSpec, context: Context, i: int) -> EpistemicState:
    """Post-measurement state re-centered on the observed outcome's central element."""
    if not 0 <= i < context.system_dim:
        raise IndexError(f"outcome index {i} out of range for a {context.system_dim}-outcome context")
    return EpistemicState(model, context.elements[i])


@dataclass(frozen=True, eq=False)
class PosteriorSampler:
    """Prior density conditioned on an observed outcome, as a filtered sampler.

    The support is an intersection region with no simple parameterization,
    so sampling rejects prior draws whose response differs from the
    conditioning outcome.  ``max_draws`` bounds the search; exhausting it
    raises ZeroProbabilityOutcomeError.
    """

    prior: EpistemicState
    context: Context
    outcome: int
    max_draws: int = 100_000

    def __post_init__(self):
        if not 0 <= self.outcome < self.context.system_dim:
            raise IndexError(
                f"outcome index {self.outcome} out of range for a "
                f"{self.context.system_dim}-outcome context"
            )
        if self.prior.center.dim != self.context.ontic_dim:
            raise DimensionMismatchError("prior and context live in different ontic dimensions")

    def unnormalized_density(self, lam: PureState) -> float:
        return density_at(self.prior, lam) * characteristic(lam, self.context, self.outcome)

    def sample_matrix(self, n: int, rng: np.random.Generator) -> np.ndarray:
        elements = element_matrix(self.context)
        out = np.empty((n, self.context.ontic_dim), dtype=np.complex128)
        filled = 0
        drawn = 0
        chunk = max(n, 256)
        while filled < n:
            if drawn >= self.max_draws and filled == 0:
                raise ZeroProbabilityOutcomeError(
                    f"outcome {self.outcome} never occurred in {drawn} prior draws"
                )
            lam = sample_conditional_matrix(self.prior, chunk, rng)
            drawn += chunk
            keep = lam[outcomes_matrix(lam, elements) == self.outcome][: n - filled]
            out[filled : filled + keep.shape[0]] = keep
            filled += keep.shape[0]
        return out

    def sample(self, rng: np.random.Generator) -> PureState:
        return PureState(self.sample_matrix(1, rng)[0])


def bayes_update(state: EpistemicState, context: Context, i: int,
                 max_draws: int = 100_000) -> PosteriorSampler:
    """Non-disturbing update: density proportional to prior * characteristic_i."""
    return PosteriorSampler(state, context, i, max_draws)


def faithful_analytic(lam: PureState, target: PureState) -> bool:
    """True iff lam yields the target's outcome in every context containing it.

    Closed form: overlap strictly above 1/2.  The boundary is classified
    unfaithful because a rotated context can tie there and the tie rule's
    effect depends on element ordering.
    """
    return overlap(lam, target) > 0.5


def base_context_containing(axis: PureState) -> Context:
    """A full (d = D) context whose element 0 is the given axis; deterministic completion."""
    comp = complement_basis(axis)
    elements = [axis] + [PureState(comp[:, k]) for k in range(comp.shape[1])]
    return Context(axis.dim, axis.dim, tuple(elements))


def rotated_element_stack(axis: PureState, n_contexts: int, rng: np.random.Generator) -> np.ndarray:
    """Element rows of n_contexts random rotations (about the axis) of the base
    context, excluding the axis itself; shape (n_contexts, D-1, D)."""
    comp = complement_basis(axis)
    blocks = haar_unitaries_stack(axis.dim - 1, n_contexts, rng)
    return np.einsum("ab,nbc->nca", comp, blocks)


def flips_under_rotations(samples: np.ndarray, axis: PureState, n_contexts: int,
                          rng: np.random.Generator, chunk: int = 128) -> np.ndarray:
    """For sample rows (m, D): True where some rotated context beats the axis.

    A flip means the sample's overlap with a rotated non-axis element strictly
    exceeds its overlap with the axis, i.e. a context containing the axis
    exists under which the sample no longer yields the axis outcome.
    """
    t_axis = np.abs(samples @ axis.amplitudes.conj()) ** 2
    flipped = np.zeros(samples.shape[0], dtype=bool)
    done = 0
    while done < n_contexts:
        k = min(chunk, n_contexts - done)
        rot = rotated_element_stack(axis, k, rng)
        live = ~flipped
        if not np.any(live):
            break
        t_rot = np.abs(np.einsum("md,nkd->mnk", samples[live], rot.conj())) ** 2
        flipped[live] = np.max(t_rot, axis=(1, 2)) > t_axis[live]
        done += k
    return flipped


def faithful_sampled(lam: PureState, target: PureState, n_contexts: int,
                     rng: np.random.Generator) -> bool:
    """Monte Carlo faithfulness check over random contexts containing the target."""
    if lam.dim != target.dim:
        raise DimensionMismatchError("state and target live in different dimensions")
    if n_contexts < 1:
        raise ValueError("need at least one context")
    sample = lam.amplitudes[None, :]
    return not bool(flips_under_rotations(sample, target, n_contexts, rng)[0])
