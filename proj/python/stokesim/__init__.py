"""Dilute rigid-particle suspensions in Stokes flow.

Thin Python surface over the C++ core: dilute-expansion particle dynamics,
the kinetic mean-field solver, and Wasserstein comparison metrics.
"""

from ._core import (
    ActivityModel,
    BackgroundFlow,
    ContractionError,
    EffectiveVelocityField,
    ExpansionOrder,
    FixedPointConfig,
    InitialDensitySpec,
    KineticEnsemble,
    ResolveMode,
    SeparationGuardError,
    ShapeModel,
    SuspensionParams,
    ValidationError,
    active_stresslet,
    baseline_step,
    compute_velocities,
    derive_epsilon,
    explicit_mf_velocity,
    fit_rate,
    kinetic_step,
    min_separation,
    orientation_velocity,
    sample_initial,
    set_max_threads,
    solve_velocity_field,
    step,
    stokeslet,
    stokeslet_gradient_apply,
    stresslet_response,
    swim_velocity,
    wasserstein_bottleneck,
    wasserstein_exact,
    wasserstein_sinkhorn,
)

__version__ = "0.1.0"

__all__ = [
    "ActivityModel",
    "BackgroundFlow",
    "ContractionError",
    "EffectiveVelocityField",
    "ExpansionOrder",
    "FixedPointConfig",
    "InitialDensitySpec",
    "KineticEnsemble",
    "ResolveMode",
    "SeparationGuardError",
    "ShapeModel",
    "SuspensionParams",
    "ValidationError",
    "active_stresslet",
    "baseline_step",
    "compute_velocities",
    "derive_epsilon",
    "explicit_mf_velocity",
    "fit_rate",
    "kinetic_step",
    "min_separation",
    "orientation_velocity",
    "sample_initial",
    "set_max_threads",
    "solve_velocity_field",
    "step",
    "stokeslet",
    "stokeslet_gradient_apply",
    "stresslet_response",
    "swim_velocity",
    "wasserstein_bottleneck",
    "wasserstein_exact",
    "wasserstein_sinkhorn",
]
