"""Monte Carlo simulation of deterministic ontological models for qubits and qutrits.

The library samples epistemic densities over complex projective ontic
spaces, evaluates deterministic measurement response functions, and
quantifies deviation from the Born rule, contextuality and repeatability.
"""

__version__ = "0.1.0"

from .errors import (
    DimensionMismatchError,
    EmptySupportError,
    OntolabError,
    ZeroProbabilityOutcomeError,
    ZeroVectorError,
)
from .states import (
    Context,
    PureState,
    RealSphereState,
    Unitary,
    apply_unitary,
    computational_context,
    distance,
    embed,
    haar_context,
    haar_state,
    haar_unitary,
    make_pure_state,
    overlap,
    rotate_context,
    unitary_fixing_axis,
)
from .models import (
    EpistemicState,
    ModelSpec,
    density_at,
    make_model,
    model_from_fragment,
    normalization,
    overlap_marginal_cdf,
    overlap_marginal_pdf,
    sample_conditional,
    sample_rejection,
    weight,
    weight_max,
)
from .measurement import (
    bayes_update,
    characteristic,
    collapse_update,
    faithful_analytic,
    faithful_sampled,
    outcome_of,
)
from .engine import (
    Estimate,
    SweepRow,
    born_probs,
    deviation_sweep,
    estimate_outcome_probs,
    marble_green_run,
    optimize_delta,
    repeatability_run,
    sequential_run,
    unfaithful_fraction,
)
from . import marble

__all__ = [
    "Context",
    "DimensionMismatchError",
    "EmptySupportError",
    "EpistemicState",
    "Estimate",
    "ModelSpec",
    "OntolabError",
    "PureState",
    "RealSphereState",
    "SweepRow",
    "Unitary",
    "ZeroProbabilityOutcomeError",
    "ZeroVectorError",
    "apply_unitary",
    "bayes_update",
    "born_probs",
    "characteristic",
    "collapse_update",
    "computational_context",
    "density_at",
    "deviation_sweep",
    "distance",
    "embed",
    "estimate_outcome_probs",
    "faithful_analytic",
    "faithful_sampled",
    "haar_context",
    "haar_state",
    "haar_unitary",
    "make_model",
    "make_pure_state",
    "marble",
    "marble_green_run",
    "model_from_fragment",
    "normalization",
    "optimize_delta",
    "outcome_of",
    "overlap",
    "overlap_marginal_cdf",
    "overlap_marginal_pdf",
    "repeatability_run",
    "rotate_context",
    "sample_conditional",
    "sample_rejection",
    "sequential_run",
    "unfaithful_fraction",
    "unitary_fixing_axis",
    "weight",
    "weight_max",
]
