"""Solver and verification suite for the Maskawa-Nakajima gap equation in
the massless abelian gluon model.

The quark mass function is computed as a fixed point of the model's
nonlinear integral operators, and every bound, monotonicity, and
contraction property the analysis guarantees is re-checked numerically.
"""

from ._core import BACKEND_NAME
from .errors import (
    ArgumentError,
    DomainError,
    MnGapError,
    PrecisionWarning,
    RegimeError,
    TruncationError,
)
from .model import (
    CutoffReport,
    Grid,
    GridFn,
    ModelParams,
    check_cutoff,
    cutoff_max_ratio,
    eval_w,
    kernel,
    make_grid,
    upper_bound_V,
    w_on_grid,
)
from .operators import (
    BApplyResult,
    TruncationCertificate,
    apply_A,
    apply_A_const_oracle,
    apply_B,
    apply_C,
    grid_for_B,
    nonlinearity,
)
from .quadrature import (
    PrefixIntegrals,
    integrate,
    prefix_integrals,
    tail_bound_B,
    truncation_radius,
)
from .scan import PhaseRecord, RefinementStudy, classify_regime, refinement_study, sweep
from .solver import SolveConfig, SolveReport, solve_A, solve_B_to_zero, solve_C_to_zero
from .verify import (
    CheckReport,
    LipschitzReport,
    check_Aw_gt_w,
    check_in_V,
    check_strict_decrease,
    check_uniqueness_condition,
    check_xepsilon,
    derivative_via_formula,
    estimate_lipschitz,
    ode_residual,
    run_suite,
    sample_V,
    sample_W,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "__version__",
    # errors
    "MnGapError", "ArgumentError", "DomainError", "RegimeError",
    "TruncationError", "PrecisionWarning",
    # model
    "ModelParams", "Grid", "GridFn", "CutoffReport", "eval_w", "w_on_grid",
    "upper_bound_V", "cutoff_max_ratio", "check_cutoff", "kernel", "make_grid",
    # quadrature
    "integrate", "PrefixIntegrals", "prefix_integrals", "tail_bound_B",
    "truncation_radius",
    # operators
    "nonlinearity", "apply_A", "apply_A_const_oracle", "apply_B", "apply_C",
    "BApplyResult", "TruncationCertificate", "grid_for_B",
    # solver
    "SolveConfig", "SolveReport", "solve_A", "solve_B_to_zero", "solve_C_to_zero",
    # verify
    "CheckReport", "LipschitzReport", "check_in_V", "check_Aw_gt_w",
    "check_strict_decrease", "derivative_via_formula", "ode_residual",
    "check_uniqueness_condition", "estimate_lipschitz", "check_xepsilon",
    "sample_V", "sample_W", "run_suite",
    # scan
    "PhaseRecord", "RefinementStudy", "classify_regime", "sweep",
    "refinement_study",
]
