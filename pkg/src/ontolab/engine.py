"""Seeded Monte Carlo estimators for outcome statistics.

Work is split into fixed-size batches; batch k of stream key (seed, i)
always uses ``numpy.random.default_rng(SeedSequence((seed, i, k)))``, so
tallies are integers merged by order-independent summation and results are
bit-identical for any worker count.  Worker processes only ever receive
immutable model/context data.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .models import EpistemicState, ModelSpec, sample_conditional_matrix, sample_rejection_matrix
from .states import Context, PureState, computational_context, element_matrix, embed, haar_states_matrix
from .measurement import PosteriorSampler, flips_under_rotations, outcomes_matrix
from . import marble

BATCH_SIZE = 20_000


def batch_stream(*key: int) -> np.random.Generator:
    """The documented substream splitting rule: one generator per integer key."""
    return np.random.default_rng(np.random.SeedSequence(tuple(int(k) for k in key)))


def wald_se(p_hat: float, n: int) -> float:
    """Wald standard error; the p=1/2 value is reported at degenerate p_hat
    to avoid zero-width intervals in comparisons."""
    if p_hat <= 0.0 or p_hat >= 1.0:
        return math.sqrt(0.25 / n)
    return math.sqrt(p_hat * (1.0 - p_hat) / n)


@dataclass(frozen=True)
class Estimate:
    """A Monte Carlo estimate of a probability with its provenance."""

    mean: float
    std_error: float
    n_samples: int
    seed: int
    n_workers: int = 1


@dataclass(frozen=True)
class SweepRow:
    theta: float
    outcome: int
    qm_prob: float
    om_estimate: Estimate
    delta: float
    model: str


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    deviation_score: float

    def max_std_error(self) -> float:
        return max(r.om_estimate.std_error for r in self.rows)


@dataclass(frozen=True)
class DeltaOptResult:
    best_delta: float
    objective: tuple  # (delta, deviation score) pairs, ascending delta
    sweeps: dict = field(compare=False)


@dataclass(frozen=True)
class UnfaithfulResult:
    """Contextuality fractions: observed flips under rotated contexts, and the
    closed-form rule (outcome 0 with overlap <= 1/2)."""

    sampled: Estimate
    analytic: Estimate


@dataclass(frozen=True)
class SequentialResult:
    step_estimates: tuple          # step -> tuple of per-outcome Estimates
    agreement: dict                # (step a, step b) -> Estimate of P(same outcome)
    qm_step_probs: tuple           # step -> ndarray of projective-update predictions
    qm_agreement: dict             # (step a, step b) -> float


def model_id(model: ModelSpec) -> str:
    return f"{model.variant}:{model.system_dim}x{model.ontic_dim}"


def _split(n: int) -> list[tuple[int, int]]:
    sizes = [(k, min(BATCH_SIZE, n - k * BATCH_SIZE)) for k in range((n + BATCH_SIZE - 1) // BATCH_SIZE)]
    return sizes


def _sum_batches(worker, jobs, n_workers: int) -> np.ndarray:
    if n_workers <= 1:
        acc = None
        for job in jobs:
            out = worker(job)
            acc = out if acc is None else acc + out
        return acc
    with ProcessPoolExecutor(max_workers=n_workers) as pool:
        acc = None
        for out in pool.map(worker, jobs):
            acc = out if acc is None else acc + out
    return acc


# ---------------------------------------------------------------------------
# batch workers (module level: sent to worker processes)

def _draw(state: EpistemicState, size: int, rng, sampler: str) -> np.ndarray:
    if sampler == "rejection":
        return sample_rejection_matrix(state, size, rng)
    return sample_conditional_matrix(state, size, rng)


def _outcome_batch(job) -> np.ndarray:
    model, center, elements, sampler, key, size = job
    rng = batch_stream(*key)
    lam = _draw(EpistemicState(model, PureState(center)), size, rng, sampler)
    return np.bincount(outcomes_matrix(lam, elements), minlength=elements.shape[0])


def _repeat_batch(job) -> np.ndarray:
    model, center, elements, update, key, size = job
    rng = batch_stream(*key)
    state = EpistemicState(model, PureState(center))
    context = _context_from_rows(model, elements)
    first = outcomes_matrix(_draw(state, size, rng, "conditional"), elements)
    second = np.empty_like(first)
    for i in range(elements.shape[0]):
        mask = first == i
        k = int(mask.sum())
        if k == 0:
            continue
        if update == "collapse":
            redrawn = sample_conditional_matrix(EpistemicState(model, context.elements[i]), k, rng)
        else:
            redrawn = PosteriorSampler(state, context, i).sample_matrix(k, rng)
        second[mask] = outcomes_matrix(redrawn, elements)
    return np.array([int(np.sum(second == first)), size], dtype=np.int64)


def _sequential_batch(job) -> np.ndarray:
    model, center, element_stacks, update, key, size = job
    rng = batch_stream(*key)
    state = EpistemicState(model, PureState(center))
    steps = len(element_stacks)
    d = element_stacks[0].shape[0]
    lam = sample_conditional_matrix(state, size, rng)
    outcomes = np.empty((steps, size), dtype=np.int64)
    for j, elements in enumerate(element_stacks):
        outcomes[j] = outcomes_matrix(lam, elements)
        if update == "collapse" and j + 1 < steps:
            refreshed = np.empty_like(lam)
            for i in range(d):
                mask = outcomes[j] == i
                k = int(mask.sum())
                if k:
                    next_state = EpistemicState(model, PureState(elements[i]))
                    refreshed[mask] = sample_conditional_matrix(next_state, k, rng)
            lam = refreshed
    counts = np.concatenate([np.bincount(outcomes[j], minlength=d) for j in range(steps)])
    agree = np.array(
        [np.sum(outcomes[a] == outcomes[b]) for a in range(steps) for b in range(a + 1, steps)],
        dtype=np.int64,
    )
    return np.concatenate([counts, agree, [size]])


def _unfaithful_batch(job) -> np.ndarray:
    law_model, law_center, elements, n_contexts, key, size = job
    rng = batch_stream(*key)
    big_d = elements.shape[1]
    if law_model is None:
        lam = haar_states_matrix(big_d, size, rng)
    else:
        lam = sample_conditional_matrix(EpistemicState(law_model, PureState(law_center)), size, rng)
    axis = PureState(elements[0])
    base_zero = outcomes_matrix(lam, elements) == 0
    t_axis = np.abs(lam @ elements[0].conj()) ** 2
    analytic = base_zero & (t_axis <= 0.5)
    flips = np.zeros(size, dtype=bool)
    if np.any(base_zero):
        flips[base_zero] = flips_under_rotations(lam[base_zero], axis, n_contexts, rng)
    return np.array([int(np.sum(flips & base_zero)), int(np.sum(analytic)), size], dtype=np.int64)


def _marble_batch(job) -> np.ndarray:
    axis_vec, alpha, key, size = job
    rng = batch_stream(*key)
    lams = marble.sample_conditional_matrix(marble.RealSphereState(axis_vec), size, rng)
    green = marble.outcomes_matrix(lams, marble.sphere_point(alpha))
    return np.array([int(np.sum(green)), size], dtype=np.int64)


def _context_from_rows(model: ModelSpec, elements: np.ndarray) -> Context:
    states = tuple(PureState(row) for row in elements)
    return Context(elements.shape[0], elements.shape[1], states)


# ---------------------------------------------------------------------------
# estimators

def born_probs(psi: PureState, context: Context) -> np.ndarray:
    """Quantum predictions for each outcome: overlaps with the central elements."""
    emb = embed(psi, context.ontic_dim)
    t = np.abs(element_matrix(context) @ emb.amplitudes.conj()) ** 2
    return t


def _check_engine_inputs(model: ModelSpec, psi: PureState, context: Context):
    if psi.dim != model.system_dim:
        raise ValueError(f"state dim {psi.dim} != model system dim {model.system_dim}")
    if context.system_dim != model.system_dim or context.ontic_dim != model.ontic_dim:
        raise ValueError("context dimensions do not match the model")


def _outcome_tallies(model, center, context, n, key, n_workers, sampler) -> np.ndarray:
    if n < 1:
        raise ValueError("need at least one sample")
    elements = element_matrix(context)
    jobs = [
        (model, center.amplitudes, elements, sampler, key + (k,), size)
        for k, size in _split(n)
    ]
    return _sum_batches(_outcome_batch, jobs, n_workers)


def estimate_outcome_probs(model: ModelSpec, psi: PureState, context: Context, n: int,
                           seed: int, n_workers: int = 1,
                           sampler: str = "conditional") -> list[Estimate]:
    """Outcome frequencies over n ontic samples; the means sum to exactly 1."""
    _check_engine_inputs(model, psi, context)
    center = embed(psi, model.ontic_dim)
    counts = _outcome_tallies(model, center, context, n, (seed,), n_workers, sampler)
    return [
        Estimate(c / n, wald_se(c / n, n), n, seed, n_workers) for c in counts
    ]


def sweep_state(theta: float, system_dim: int) -> PureState:
    """cos(theta)|0> + sin(theta)|1> padded to the system dimension."""
    amps = np.zeros(system_dim, dtype=np.complex128)
    amps[0], amps[1] = np.cos(theta), np.sin(theta)
    return PureState(amps)


def deviation_sweep(model: ModelSpec, theta_grid, n: int, seed: int,
                    n_workers: int = 1, sampler: str = "conditional") -> SweepResult:
    """Per-(theta, outcome) comparison of model frequencies against the
    quantum predictions for states in the 0-1 coordinate plane, plus the
    worst absolute deviation across the sweep."""
    theta_grid = list(theta_grid)
    if not theta_grid:
        raise ValueError("theta grid must be nonempty")
    context = computational_context(model.system_dim, model.ontic_dim)
    rows = []
    score = 0.0
    for i, theta in enumerate(theta_grid):
        psi = sweep_state(theta, model.system_dim)
        qm = born_probs(psi, context)
        center = embed(psi, model.ontic_dim)
        counts = _outcome_tallies(model, center, context, n, (seed, i), n_workers, sampler)
        for outcome, c in enumerate(counts):
            est = Estimate(c / n, wald_se(c / n, n), n, seed, n_workers)
            rows.append(SweepRow(theta, outcome, float(qm[outcome]), est, model.delta, model_id(model)))
            score = max(score, abs(est.mean - qm[outcome]))
    return SweepResult(tuple(rows), score)


def optimize_delta(model: ModelSpec, delta_grid, theta_grid, n: int, seed: int,
                   n_workers: int = 1) -> DeltaOptResult:
    """Sweep the support cutoff over a grid with common random numbers and
    pick the delta with the smallest deviation score (lowest delta on ties)."""
    deltas = sorted(float(x) for x in delta_grid)
    if not deltas:
        raise ValueError("delta grid must be nonempty")
    sweeps = {}
    objective = []
    for dlt in deltas:
        sweep = deviation_sweep(model.with_delta(dlt), theta_grid, n, seed, n_workers)
        sweeps[dlt] = sweep
        objective.append((dlt, sweep.deviation_score))
    best = min(objective, key=lambda pair: pair[1])[0]
    return DeltaOptResult(best, tuple(objective), sweeps)


def unfaithful_fraction(context: Context, sampling_law, n: int, n_contexts: int,
                        seed: int, n_workers: int = 1) -> UnfaithfulResult:
    """Fraction of samples answering 0 in the base context but differently in
    some rotated context about element 0, next to the closed-form fraction."""
    if n < 1 or n_contexts < 1:
        raise ValueError("need n >= 1 and n_contexts >= 1")
    if sampling_law == "haar":
        law_model, law_center = None, None
    elif isinstance(sampling_law, EpistemicState):
        law_model, law_center = sampling_law.model, sampling_law.center.amplitudes
        if sampling_law.center.dim != context.ontic_dim:
            raise ValueError("sampling law and context live in different ontic dimensions")
    else:
        raise ValueError("sampling_law must be 'haar' or an EpistemicState")
    elements = element_matrix(context)
    jobs = [
        (law_model, law_center, elements, n_contexts, (seed, k), size)
        for k, size in _split(n)
    ]
    flips, analytic, total = _sum_batches(_unfaithful_batch, jobs, n_workers)
    return UnfaithfulResult(
        Estimate(flips / total, wald_se(flips / total, total), total, seed, n_workers),
        Estimate(analytic / total, wald_se(analytic / total, total), total, seed, n_workers),
    )


def repeatability_run(model: ModelSpec, psi: PureState, context: Context, update: str,
                      n: int, seed: int, n_workers: int = 1) -> Estimate:
    """P(second outcome = first) when the same context is measured twice,
    under the re-centering collapse or the non-disturbing Bayesian filter."""
    if update not in ("collapse", "bayes"):
        raise ValueError("update must be 'collapse' or 'bayes'")
    if n < 1:
        raise ValueError("need at least one trial")
    _check_engine_inputs(model, psi, context)
    center = embed(psi, model.ontic_dim)
    elements = element_matrix(context)
    jobs = [
        (model, center.amplitudes, elements, update, (seed, k), size)
        for k, size in _split(n)
    ]
    repeats, total = _sum_batches(_repeat_batch, jobs, n_workers)
    return Estimate(repeats / total, wald_se(repeats / total, total), total, seed, n_workers)


def _qm_chain(psi_emb: np.ndarray, element_stacks) -> tuple[tuple, dict]:
    steps = len(element_stacks)
    d = element_stacks[0].shape[0]
    if d ** steps > 10 ** 6:
        raise ValueError("chain too long for exact projective enumeration")
    marginals = [np.zeros(d) for _ in range(steps)]
    agreement = {(a, b): 0.0 for a in range(steps) for b in range(a + 1, steps)}
    for path in product(range(d), repeat=steps):
        p = abs(np.vdot(element_stacks[0][path[0]], psi_emb)) ** 2
        for j in range(1, steps):
            p *= abs(np.vdot(element_stacks[j][path[j]], element_stacks[j - 1][path[j - 1]])) ** 2
        for j in range(steps):
            marginals[j][path[j]] += p
        for a in range(steps):
            for b in range(a + 1, steps):
                if path[a] == path[b]:
                    agreement[(a, b)] += p
    return tuple(marginals), agreement


def sequential_run(model: ModelSpec, psi: PureState, contexts, update: str,
                   n: int, seed: int, n_workers: int = 1) -> SequentialResult:
    """Simulate a measurement chain under the chosen update rule and report
    per-step outcome frequencies and pairwise same-outcome agreement, next
    to the projective-update quantum predictions."""
    contexts = list(contexts)
    if not contexts:
        raise ValueError("need at least one context in the chain")
    if update not in ("collapse", "bayes"):
        raise ValueError("update must be 'collapse' or 'bayes'")
    if n < 1:
        raise ValueError("need at least one trial")
    for c in contexts:
        if c.system_dim != model.system_dim or c.ontic_dim != model.ontic_dim:
            raise ValueError("every chain context must match the model dimensions")
    _check_engine_inputs(model, psi, contexts[0])
    center = embed(psi, model.ontic_dim)
    stacks = [element_matrix(c) for c in contexts]
    jobs = [
        (model, center.amplitudes, stacks, update, (seed, k), size)
        for k, size in _split(n)
    ]
    merged = _sum_batches(_sequential_batch, jobs, n_workers)
    steps, d = len(stacks), model.system_dim
    total = int(merged[-1])
    counts = merged[: steps * d].reshape(steps, d)
    pair_counts = merged[steps * d : -1]
    step_estimates = tuple(
        tuple(Estimate(c / total, wald_se(c / total, total), total, seed, n_workers) for c in row)
        for row in counts
    )
    agreement = {}
    idx = 0
    for a in range(steps):
        for b in range(a + 1, steps):
            p = pair_counts[idx] / total
            agreement[(a, b)] = Estimate(p, wald_se(p, total), total, seed, n_workers)
            idx += 1
    qm_marginals, qm_agreement = _qm_chain(center.amplitudes, stacks)
    return SequentialResult(step_estimates, agreement, qm_marginals, qm_agreement)


def marble_green_run(alphas, n: int, seed: int, n_workers: int = 1) -> SweepResult:
    """Green-outcome frequency with lights at angle alpha from the preparation
    axis, one sweep row pair per alpha (quantum prediction cos^2 alpha)."""
    alphas = list(alphas)
    if not alphas:
        raise ValueError("alpha grid must be nonempty")
    if n < 1:
        raise ValueError("need at least one sample")
    rows = []
    score = 0.0
    mid = model_id(ModelSpec("marble-world", 2, 2, 0.5))
    for i, alpha in enumerate(alphas):
        jobs = [
            (marble.POLE.vector, float(alpha), (seed, i, k), size)
            for k, size in _split(n)
        ]
        greens, total = _sum_batches(_marble_batch, jobs, n_workers)
        qm = float(np.cos(alpha) ** 2)
        for outcome, (count, pred) in enumerate([(greens, qm), (total - greens, 1.0 - qm)]):
            est = Estimate(count / total, wald_se(count / total, total), total, seed, n_workers)
            rows.append(SweepRow(float(alpha), outcome, pred, est, 0.5, mid))
            score = max(score, abs(est.mean - pred))
    return SweepResult(tuple(rows), score)
