"""Closed-loop simulation of the cart/pendulum under state feedback.

Covers the three experiment families: continuous control of the linearized
and nonlinear plants, sampled (zero-order-hold) control with a discrete
gain, and performance sweeps over the sampling period.  Integration is
fixed-step classical RK4 so that continuous and sampled runs share a time
grid; runs are deterministic and terminate early once the state leaves a
configurable divergence bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discretize import zoh_discretize
from .model import PendulumParams, _check_state, _dynamics_raw, linearize
from .placement import map_poles_s_to_z, place

__all__ = [
    "DivergenceError",
    "ContinuousController",
    "SampledController",
    "SimConfig",
    "Trajectory",
    "PerfMetrics",
    "step_rk4",
    "simulate_continuous",
    "simulate_sampled",
    "evaluate",
    "sweep_sampling",
]

# Fraction of the initial state norm defining the settling band.
SETTLE_BAND = 0.02


class DivergenceError(RuntimeError):
    """Raised when an integration step produces non-finite state."""


def _frozen_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1).copy()
    x.flags.writeable = False
    return x


def _substeps_per_sample(T: float, h: float) -> int:
    n_sub = int(round(T / h))
    if n_sub < 1 or abs(n_sub * h - T) > 1e-9 * T:
        raise ValueError(f"h={h:g} does not divide T={T:g}")
    return n_sub


@dataclass(frozen=True, eq=False)
class ContinuousController:
    """State feedback ``u = -K x + psi * delta`` closed through the dynamics."""

    K: np.ndarray
    psi: float = 0.0
    delta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "K", _frozen_vector(self.K))


@dataclass(frozen=True, eq=False)
class SampledController:
    """State feedback updated only at sample instants ``t = k T`` (ZOH between)."""

    K: np.ndarray
    T: float
    psi: float = 0.0
    delta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "K", _frozen_vector(self.K))
        if not self.T > 0:
            raise ValueError("sampling period T must be positive")


@dataclass(frozen=True, eq=False)
class SimConfig:
    """One closed-loop run: plant choice, controller, initial state, grid."""

    params: PendulumParams
    controller: ContinuousController | SampledController
    x0: np.ndarray
    plant: str = "nonlinear"
    t_final: float = 10.0
    h: float = 1e-3
    divergence_bound: float = 1e3

    def __post_init__(self) -> None:
        if self.plant not in ("nonlinear", "linearized"):
            raise ValueError(f"unknown plant {self.plant!r}")
        if not (0 < self.h <= self.t_final):
            raise ValueError("need 0 < h <= t_final")
        if not self.divergence_bound > 0:
            raise ValueError("divergence_bound must be positive")
        if isinstance(self.controller, SampledController):
            _substeps_per_sample(self.controller.T, self.h)
        object.__setattr__(self, "x0", _frozen_vector(_check_state(self.x0)))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-indexed record of one run; parallel arrays over the h-grid."""

    times: np.ndarray
    states: np.ndarray
    inputs: np.ndarray
    outputs: np.ndarray
    terminated_early: bool = False
    reason: str | None = None

    def __post_init__(self) -> None:
        k = len(self.times)
        if not (len(self.states) == len(self.inputs) == len(self.outputs) == k):
            raise ValueError("trajectory arrays must have equal length")


@dataclass(frozen=True)
class PerfMetrics:
    """Scalar performance summary of one trajectory."""

    peak_y1: float
    overshoot_y1: float
    settling_time: float
    stable: bool


def step_rk4(f, x, u: float, h: float) -> np.ndarray:
    """One classical 4th-order Runge-Kutta step with ``u`` held constant.

    ``f(x, u)`` returns the state derivative.  Raises
    :class:`DivergenceError` if the step result is non-finite (a non-finite
    intermediate stage propagates into the result).
    """
    if not h > 0:
        raise ValueError("step size h must be positive")
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):  # divergence raises below
        k1 = f(x, u)
        k2 = f(x + 0.5 * h * k1, u)
        k3 = f(x + 0.5 * h * k2, u)
        k4 = f(x + h * k3, u)
        out = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise DivergenceError("integration step produced non-finite state")
    return out


def _derivative(cfg: SimConfig):
    if cfg.plant == "nonlinear":
        p = cfg.params
        return lambda x, u: _dynamics_raw(x, u, p)
    lin = linearize(cfg.params)
    A, b = lin.A, lin.B[:, 0]
    return lambda x, u: A @ x + b * u


def _run(cfg: SimConfig, n_sub: int | None) -> Trajectory:
    """Shared loop.  ``n_sub`` substeps per controller update for sampled
    control; ``None`` closes the loop through the vector field itself, with
    the feedback re-evaluated at every integrator stage."""
    f = _derivative(cfg)
    ctl = cfg.controller
    K, psi, delta = ctl.K, ctl.psi, ctl.delta

    def control(x: np.ndarray) -> float:
        return float(-(K @ x)) + psi * delta

    if n_sub is None:
        field = lambda x, _u: f(x, control(x))
        n_sub = 1
    else:
        field = f

    n_steps = int(round(cfg.t_final / cfg.h))
    h, bound = cfg.h, cfg.divergence_bound

    times = np.empty(n_steps + 1)
    states = np.empty((n_steps + 1, 4))
    inputs = np.empty(n_steps + 1)
    outputs = np.empty((n_steps + 1, 2))
    terminated = False
    reason = None

    x = np.array(cfg.x0)
    u = 0.0
    count = 0
    for k in range(n_steps + 1):
        if k % n_sub == 0:
            u = control(x)
        times[k] = k * h
        states[k] = x
        inputs[k] = u
        outputs[k] = (x[0], x[2])
        count = k + 1
        if k == n_steps:
            break
        try:
            x = step_rk4(field, x, u, h)
        except DivergenceError:
            terminated = True
            reason = "non-finite state"
            break
        if np.max(np.abs(x)) > bound:
            # record the offending sample, flagged, then stop
            kk = k + 1
            if kk % n_sub == 0:
                u = control(x)
            times[kk] = kk * h
            states[kk] = x
            inputs[kk] = u
            outputs[kk] = (x[0], x[2])
            count = kk + 1
            terminated = True
            reason = "divergence bound exceeded"
            break

    return Trajectory(
        times=times[:count].copy(),
        states=states[:count].copy(),
        inputs=inputs[:count].copy(),
        outputs=outputs[:count].copy(),
        terminated_early=terminated,
        reason=reason,
    )


def simulate_continuous(cfg: SimConfig) -> Trajectory:
    """Run with the feedback closed through the vector field.

    The control law is evaluated at every integrator stage, so on the
    linearized plant this integrates ``x' = (A - B K) x + B psi delta`` at
    full RK4 accuracy; recorded inputs are the law at the grid states.
    """
    if not isinstance(cfg.controller, ContinuousController):
        raise ValueError("simulate_continuous needs a ContinuousController")
    return _run(cfg, n_sub=None)


def simulate_sampled(cfg: SimConfig) -> Trajectory:
    """Run with the feedback updated only at multiples of the sampling period.

    The integrator substep ``h`` must divide ``T`` (within 1e-9 relative) so
    sample instants land on the grid.
    """
    if not isinstance(cfg.controller, SampledController):
        raise ValueError("simulate_sampled needs a SampledController")
    return _run(cfg, n_sub=_substeps_per_sample(cfg.controller.T, cfg.h))


def evaluate(traj: Trajectory) -> PerfMetrics:
    """Scalar metrics: peak cart excursion, overshoot, settling, stability.

    Settling is the first time the state norm enters, and never again
    leaves, a band of 2% of the initial state norm; overshoot measures how
    far ``y1`` swings past zero against its initial sign, as a fraction of
    ``|y1(0)|``.  A run is stable iff it was not cut off and it settled.
    """
    if len(traj.times) == 0:
        raise ValueError("empty trajectory")
    y1 = traj.outputs[:, 0]
    peak = float(np.max(np.abs(y1)))
    if y1[0] == 0.0:
        overshoot = 0.0
    else:
        s0 = 1.0 if y1[0] > 0 else -1.0
        overshoot = max(0.0, float(np.max(-s0 * y1)) / abs(y1[0]))

    norms = np.max(np.abs(traj.states), axis=1)
    band = SETTLE_BAND * norms[0]
    outside = np.nonzero(norms > band)[0]
    if outside.size == 0:
        settling = float(traj.times[0])
    elif outside[-1] + 1 < norms.size:
        settling = float(traj.times[outside[-1] + 1])
    else:
        settling = np.inf

    stable = bool((not traj.terminated_early) and np.isfinite(settling))
    return PerfMetrics(
        peak_y1=peak,
        overshoot_y1=overshoot,
        settling_time=settling,
        stable=stable,
    )


def sweep_sampling(
    params: PendulumParams,
    poles,
    x0,
    Ts,
    redesign: bool = True,
    *,
    plant: str = "nonlinear",
    delta: float = 0.0,
    t_final: float = 10.0,
    h: float = 1e-3,
    divergence_bound: float = 1e3,
) -> list[tuple[float, PerfMetrics]]:
    """Sampled-control performance for each sampling period in ``Ts``.

    With ``redesign`` the gain is re-synthesized for every T by discretizing
    the plant and placing the ``exp(s T)``-mapped poles; without it the
    continuous-design gain is applied sampled, unchanged.  Entries are
    independent; results keep the input order.
    """
    sys_c = linearize(params)
    fixed_gain = None if redesign else place(sys_c, poles).K
    results: list[tuple[float, PerfMetrics]] = []
    for T in Ts:
        if redesign:
            gain = place(zoh_discretize(sys_c, T), map_poles_s_to_z(poles, T)).K
        else:
            gain = fixed_gain
        cfg = SimConfig(
            params=params,
            controller=SampledController(K=gain, T=float(T), delta=delta),
            x0=x0,
            plant=plant,
            t_final=t_final,
            h=h,
            divergence_bound=divergence_bound,
        )
        results.append((float(T), evaluate(simulate_sampled(cfg))))
    return results
