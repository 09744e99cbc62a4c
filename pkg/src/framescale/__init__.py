"""Finite frame pairs: multiplier norms, rescaling weights, and dilations.

The package is organized around FramePair, a finite family of vector
pairs in C^d.  frames computes Bessel and frame bounds, multiplier
estimates the masked-combination operator norm from below and its
matrix-coefficient refinement, rescale finds log-weights whose balanced
Bessel bounds certify the norm from above and builds the explicit
dilation, and verify turns every supporting inequality into an
executable check.
"""

from .frames import (
    BesselBounds,
    FramePair,
    bessel_and_frame_bounds,
    frame_operator,
    is_schauder_identity,
    pair_operator,
)
from .instances import GENERATOR_KINDS, generate, mangle, mangling_scalars
from .multiplier import (
    MultiplierNormEstimate,
    apply_mask,
    cb_lower_sampled,
    mask_matrix,
    norm_lower_alternating,
    norm_oracle_grid,
)
from .rescale import (
    CbBracket,
    Dilation,
    ScalingResult,
    balance,
    bessel_pair_objective,
    build_dilation,
    dilation_reconstruct,
    extract_scaling,
    optimize,
    subgradient,
)
from .verify import (
    RatioConfig,
    VerificationError,
    end_to_end_rescale_check,
    khintchine_check,
    ratio_experiment,
    run_suite,
    super_key_check,
    trace_lemma_check,
)

__version__ = "0.1.0"

__all__ = [
    "BesselBounds",
    "CbBracket",
    "Dilation",
    "FramePair",
    "GENERATOR_KINDS",
    "MultiplierNormEstimate",
    "RatioConfig",
    "ScalingResult",
    "VerificationError",
    "apply_mask",
    "balance",
    "bessel_and_frame_bounds",
    "bessel_pair_objective",
    "build_dilation",
    "cb_lower_sampled",
    "dilation_reconstruct",
    "end_to_end_rescale_check",
    "extract_scaling",
    "frame_operator",
    "generate",
    "is_schauder_identity",
    "khintchine_check",
    "mangle",
    "mangling_scalars",
    "mask_matrix",
    "norm_lower_alternating",
    "norm_oracle_grid",
    "optimize",
    "pair_operator",
    "ratio_experiment",
    "run_suite",
    "subgradient",
    "super_key_check",
    "trace_lemma_check",
    "__version__",
]
