"""State-feedback control toolkit and simulator for the inverted pendulum on a cart.

Covers the full design pipeline: nonlinear modeling and linearization,
controllability/observability rank tests, canonical-form pole placement in
continuous and discrete time, zero-order-hold discretization, and fixed-step
closed-loop simulation with sampling-period sweeps.
"""

from .discretize import sweep_discretize, zoh_discretize
from .linalg import (
    DEFAULT_RANK_TOL,
    SingularMatrixError,
    UnpairedRootError,
    char_poly,
    inverse,
    mat_exp,
    poly_from_roots,
    rank,
)
from .model import (
    ANGLE_PI,
    ANGLE_ZERO,
    LinearSystem,
    PendulumParams,
    dynamics,
    equilibria,
    linearize,
    output,
)
from .placement import (
    CanonicalDecomposition,
    GainSpec,
    SynthesisError,
    UncontrollableError,
    canonical_transform,
    feedforward_gain,
    gamma_matrix,
    map_poles_s_to_z,
    place,
    sort_poles,
)
from .properties import PropertyReport, check, controllability_matrix, observability_matrix
from .simulate import (
    ContinuousController,
    DivergenceError,
    PerfMetrics,
    SampledController,
    SimConfig,
    Trajectory,
    evaluate,
    simulate_continuous,
    simulate_sampled,
    step_rk4,
    sweep_sampling,
)

__version__ = "0.1.0"

__all__ = [
    "ANGLE_PI",
    "ANGLE_ZERO",
    "CanonicalDecomposition",
    "ContinuousController",
    "DEFAULT_RANK_TOL",
    "DivergenceError",
    "GainSpec",
    "LinearSystem",
    "PendulumParams",
    "PerfMetrics",
    "PropertyReport",
    "SampledController",
    "SimConfig",
    "SingularMatrixError",
    "SynthesisError",
    "Trajectory",
    "UncontrollableError",
    "UnpairedRootError",
    "canonical_transform",
    "char_poly",
    "check",
    "controllability_matrix",
    "dynamics",
    "equilibria",
    "evaluate",
    "feedforward_gain",
    "gamma_matrix",
    "inverse",
    "linearize",
    "map_poles_s_to_z",
    "mat_exp",
    "observability_matrix",
    "output",
    "place",
    "poly_from_roots",
    "rank",
    "simulate_continuous",
    "simulate_sampled",
    "sort_poles",
    "step_rk4",
    "sweep_discretize",
    "sweep_sampling",
    "zoh_discretize",
]
