"""Resurrected strictly alpha-stable positive self-similar Markov processes.

Construction via Lamperti's transform, resurrection-kernel analytics,
absorption-time classification, two-sided kernel estimates, and Monte
Carlo path simulation.
"""

from .classify import (
    ClassificationReport,
    CriticalAlphas,
    censored_critical_alphas,
    censored_mean,
    classify,
    critical_alphas,
    critical_curve,
    mean_xi1,
    modified_kernel_mean,
    overline_psi,
    recurrent_extension_kappa,
    region_grid,
    symmetric_region,
)
from .errors import (
    BracketError,
    DivergenceError,
    DomainError,
    NumericError,
    ParameterError,
)
from .estimates import check_weak_scaling, envelope, verify_comparability
from .kernels import ResurrectionKernel
from .phi import (
    DiracPhi,
    ExpPhi,
    PhiMeasure,
    PolyPhi,
    TabulatedPhi,
    from_generator,
    is_symmetric,
    parse_phi,
    resolve_phi,
)
from .simulate import (
    LevyPath,
    PssmpPath,
    SimConfig,
    lamperti_transform,
    sample_xi_bar_endpoints,
    sample_xi_bar_path,
    simulate_step_process,
)
from .stable import StableParams, validate

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "ClassificationReport",
    "CriticalAlphas",
    "DiracPhi",
    "DivergenceError",
    "DomainError",
    "ExpPhi",
    "LevyPath",
    "NumericError",
    "ParameterError",
    "PhiMeasure",
    "PolyPhi",
    "PssmpPath",
    "ResurrectionKernel",
    "SimConfig",
    "StableParams",
    "TabulatedPhi",
    "censored_critical_alphas",
    "censored_mean",
    "check_weak_scaling",
    "classify",
    "critical_alphas",
    "critical_curve",
    "envelope",
    "from_generator",
    "is_symmetric",
    "lamperti_transform",
    "mean_xi1",
    "modified_kernel_mean",
    "overline_psi",
    "parse_phi",
    "recurrent_extension_kappa",
    "region_grid",
    "resolve_phi",
    "sample_xi_bar_endpoints",
    "sample_xi_bar_path",
    "simulate_step_process",
    "symmetric_region",
    "validate",
    "verify_comparability",
    "__version__",
]
