"""Steady-state entanglement of twin optical beams in a coherently prepared medium.

The package propagates a control beam and the Raman-generated twin beam
through a three-level medium prepared in a ground-state superposition,
transports the quantum fluctuations' second moments alongside, and
evaluates the joint-quadrature inseparability measure V together with its
closed-form approximations and parameter-scan optima.
"""

from .analytic import (
    AnalyticApprox,
    analytic_summary,
    analytic_v,
    approx_coefficients,
    coefficient_scaling_estimates,
    growth_parameter,
)
from .correlations import (
    CorrelationState,
    EntanglementResult,
    dgcz_theta,
    dgcz_value,
    integrate_correlations,
    lyapunov_closed_form,
    propagate_correlations,
    vacuum_initial_correlations,
)
from .errors import (
    ConfigError,
    CvTwinError,
    DomainError,
    IntegrationFailure,
    NoImprovement,
    NonPhysical,
    SingularSystem,
)
from .fluctuations import (
    AssemblyOptions,
    FluctuationMatrices,
    assemble_fluctuations,
    build_m1,
    build_m2,
    diffusion_matrix,
    drift_matrix,
    effective_rates,
    noise_matrix,
)
from .mean_field import (
    FieldState,
    MeanFieldCoherences,
    beta_coefficients,
    mean_field_coherences,
    propagate_mean_field,
    stable_state,
)
from .params import ModelParams
from .sweeps import (
    GridPoint,
    SweepAxis,
    SweepResult,
    apply_point,
    evaluate_v,
    grid_sweep,
    optimize_v,
)
from .vortex import (
    VortexMapResult,
    VortexProfile,
    lg_amplitude,
    radial_entanglement_map,
    ring_radius,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticApprox",
    "AssemblyOptions",
    "ConfigError",
    "CorrelationState",
    "CvTwinError",
    "DomainError",
    "EntanglementResult",
    "FieldState",
    "FluctuationMatrices",
    "GridPoint",
    "IntegrationFailure",
    "MeanFieldCoherences",
    "ModelParams",
    "NoImprovement",
    "NonPhysical",
    "SingularSystem",
    "SweepAxis",
    "SweepResult",
    "VortexMapResult",
    "VortexProfile",
    "analytic_summary",
    "analytic_v",
    "apply_point",
    "approx_coefficients",
    "assemble_fluctuations",
    "beta_coefficients",
    "build_m1",
    "build_m2",
    "coefficient_scaling_estimates",
    "dgcz_theta",
    "dgcz_value",
    "diffusion_matrix",
    "drift_matrix",
    "effective_rates",
    "evaluate_v",
    "grid_sweep",
    "growth_parameter",
    "integrate_correlations",
    "lg_amplitude",
    "lyapunov_closed_form",
    "mean_field_coherences",
    "noise_matrix",
    "optimize_v",
    "propagate_correlations",
    "propagate_mean_field",
    "radial_entanglement_map",
    "ring_radius",
    "stable_state",
    "vacuum_initial_correlations",
    "__version__",
]
