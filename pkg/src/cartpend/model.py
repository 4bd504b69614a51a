"""Inverted pendulum on a cart: nonlinear plant, equilibria, linearization.

State vector is ``[s, s_dot, phi, phi_dot]``: cart displacement (m), cart
velocity (m/s), pendulum angle (rad) and angular velocity (rad/s).  The
single input ``u`` is the horizontal force on the cart (N); the measured
outputs are ``(s, phi)``.  ``phi = 0`` is the inverted position: the small
pendulum mass is lumped away, so the cart equation decouples from the rod
and the upright linearization carries the unstable ``+g/L`` stiffness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import char_poly

__all__ = [
    "PendulumParams",
    "LinearSystem",
    "dynamics",
    "output",
    "linearize",
    "equilibria",
    "ANGLE_ZERO",
    "ANGLE_PI",
]

# Equilibrium selectors for linearize().
ANGLE_ZERO = "angle-zero"
ANGLE_PI = "angle-pi"


@dataclass(frozen=True)
class PendulumParams:
    """Physical constants of the cart/pendulum plant.

    Defaults are the reference values used throughout the test suite:
    a 1 kg cart with a 0.842 m rod, unit viscous friction, g = 9.8093.
    """

    M: float = 1.0  # cart mass, kg
    L: float = 0.842  # pendulum length, m
    F: float = 1.0  # cart friction coefficient, kg/s
    g: float = 9.8093  # gravitational acceleration, m/s^2

    def __post_init__(self) -> None:
        if not (self.M > 0 and self.L > 0 and self.g > 0):
            raise ValueError("M, L and g must be positive")
        if self.F < 0:
            raise ValueError("F must be non-negative")
        for name in ("M", "L", "F", "g"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """State-space triple (A, B, C), continuous or discrete.

    ``dt`` is ``None`` for a continuous-time system and the sampling period
    (s) for a discrete-time one.  Matrices are stored read-only.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    dt: float | None = None

    def __post_init__(self) -> None:
        A = _frozen(self.A)
        B = _frozen(self.B)
        C = _frozen(self.C)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"A must be square, got shape {A.shape}")
        n = A.shape[0]
        if B.ndim != 2 or B.shape[0] != n:
            raise ValueError(f"B must be {n}xm, got shape {B.shape}")
        if C.ndim != 2 or C.shape[1] != n:
            raise ValueError(f"C must be px{n}, got shape {C.shape}")
        for name, m in (("A", A), ("B", B), ("C", C)):
            if not np.all(np.isfinite(m)):
                raise ValueError(f"{name} has non-finite entries")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("discrete systems need dt > 0")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def is_discrete(self) -> bool:
        return self.dt is not None


def _check_state(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (4,):
        raise ValueError(f"state must have 4 components, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("state has non-finite components")
    return x


def _dynamics_raw(x: np.ndarray, u: float, p: PendulumParams) -> np.ndarray:
    # Unvalidated core shared with the simulator's inner loop.
    sdot, phi, phidot = x[1], x[2], x[3]
    cos_phi = np.cos(phi)
    sddot = -(p.F / p.M) * sdot + u / p.M
    phiddot = (
        (p.g / p.L) * np.sin(phi)
        + (p.F / (p.M * p.L)) * cos_phi * sdot
        - cos_phi * u / (p.M * p.L)
    )
    return np.array([sdot, sddot, phidot, phiddot])


def dynamics(x, u: float, p: PendulumParams) -> np.ndarray:
    """Nonlinear state derivative for force input ``u``.

    Cart: ``s_ddot = -(F/M) s_dot + u/M``.  Rod torque balance:
    ``phi_ddot = (g/L) sin(phi) + (F/(M L)) cos(phi) s_dot
    - (1/(M L)) cos(phi) u``.
    """
    x = _check_state(x)
    if not np.isfinite(u):
        raise ValueError("input u must be finite")
    return _dynamics_raw(x, u, p)


def output(x) -> tuple[float, float]:
    """Measured outputs ``(y1, y2) = (s, phi)``."""
    x = _check_state(x)
    return float(x[0]), float(x[2])


def linearize(p: PendulumParams, equilibrium: str = ANGLE_ZERO) -> LinearSystem:
    """First-order model at one of the two force-free equilibria.

    ``angle-zero`` expands around ``phi = 0`` (``cos -> 1``, ``sin -> phi``);
    ``angle-pi`` works in the shifted coordinate ``phi' = phi - pi``
    (``cos -> -1``, ``sin -> -phi'``), flipping the signs of the angle row
    couplings and of the input's torque entry.

    Returns a continuous-time :class:`LinearSystem` whose C matrix selects
    ``(s, phi)``.
    """
    b = p.F / (p.M * p.L)
    a = p.g / p.L
    if equilibrium == ANGLE_ZERO:
        row4 = [0.0, b, a, 0.0]
        b4 = -1.0 / (p.M * p.L)
    elif equilibrium == ANGLE_PI:
        row4 = [0.0, -b, -a, 0.0]
        b4 = 1.0 / (p.M * p.L)
    else:
        raise ValueError(f"unknown equilibrium selector {equilibrium!r}")
    A = np.array(
        [
            [0.0, 1.0, 0.0, 0.0],
            [0.0, -p.F / p.M, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            row4,
        ]
    )
    B = np.array([[0.0], [1.0 / p.M], [0.0], [b4]])
    C = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]])
    return LinearSystem(A, B, C, dt=None)


def _stability_tag(eigs: np.ndarray, tol: float = 1e-9) -> str:
    max_re = float(np.max(eigs.real))
    if max_re > tol:
        return "unstable"
    if max_re < -tol:
        return "stable"
    return "marginal"


def equilibria(p: PendulumParams) -> list[tuple[np.ndarray, str]]:
    """The two force-free equilibria with eigenvalue-derived stability tags.

    Returns ``[(state at phi=0, tag), (state at phi=pi, tag)]``.  Tags come
    from the real parts of the corresponding linearization's eigenvalues:
    the ``phi = 0`` point carries the ``+sqrt(g/L)`` divergence and is
    unstable; ``phi = pi`` is oscillatory (no eigenvalue leaves the
    imaginary axis rightward), hence marginal.
    """
    out = []
    for phi, sel in ((0.0, ANGLE_ZERO), (np.pi, ANGLE_PI)):
        sys = linearize(p, sel)
        eigs = np.roots(char_poly(sys.A))
        out.append((np.array([0.0, 0.0, phi, 0.0]), _stability_tag(eigs)))
    return out
