"""Trace Bregman divergences of positive matrices: multiple cross-checked
representations, joint-convexity probing, and Tsallis entropy inequalities."""

__version__ = "0.1.0"

from .calculus import (
    Superoperator,
    frechet_derivative,
    hermitian_basis,
    lr_apply,
    matrix_function,
    superop_inverse,
    superoperator_of,
)
from .convexity import (
    ConvexityReport,
    entropy_class_probe,
    joint_convexity_trial,
    operator_concavity_trial,
    quadratic_form_convexity_trial,
)
from .divergence import (
    METHODS,
    DivergenceValue,
    all_methods,
    bregman,
    bregman_extended,
    tsallis_closed_form,
)
from .functions import (
    ScalarFunctionFamily,
    custom_family,
    divided_difference,
    entropy,
    ln_q,
    parse_family,
    power,
    quadratic,
    scalar_eval,
    shifted_entropy,
    tsallis,
)
from .linalg import (
    SpectralDecomposition,
    eigh,
    hs_inner,
    partial_trace,
    random_density,
    tensor,
)
from .states import (
    DensityMatrix,
    contraction_monotonicity_check,
    density,
    partial_trace_monotonicity_demo,
    pinch_to_uniform,
    saturating_state,
    tripartite,
    tsallis_entropy,
    unitary_mixture_apply,
    von_neumann_entropy,
    weighted_ssa_slack,
    weyl_unitaries,
)

__all__ = [
    "__version__",
    "ScalarFunctionFamily",
    "SpectralDecomposition",
    "Superoperator",
    "DivergenceValue",
    "ConvexityReport",
    "DensityMatrix",
    "METHODS",
    "all_methods",
    "bregman",
    "bregman_extended",
    "contraction_monotonicity_check",
    "custom_family",
    "density",
    "divided_difference",
    "eigh",
    "entropy",
    "entropy_class_probe",
    "frechet_derivative",
    "hermitian_basis",
    "hs_inner",
    "joint_convexity_trial",
    "ln_q",
    "lr_apply",
    "matrix_function",
    "operator_concavity_trial",
    "parse_family",
    "partial_trace",
    "partial_trace_monotonicity_demo",
    "pinch_to_uniform",
    "power",
    "quadratic",
    "quadratic_form_convexity_trial",
    "random_density",
    "saturating_state",
    "scalar_eval",
    "shifted_entropy",
    "superop_inverse",
    "superoperator_of",
    "tensor",
    "tripartite",
    "tsallis",
    "tsallis_closed_form",
    "tsallis_entropy",
    "unitary_mixture_apply",
    "von_neumann_entropy",
    "weighted_ssa_slack",
    "weyl_unitaries",
]
