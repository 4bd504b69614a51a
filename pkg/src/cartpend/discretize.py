"""Zero-order-hold discretization of continuous state-space systems."""

from __future__ import annotations

import numpy as np

from .linalg import mat_exp
from .model import LinearSystem

__all__ = ["zoh_discretize", "sweep_discretize"]


def zoh_discretize(sys: LinearSystem, T: float) -> LinearSystem:
    """Exact step-invariant discrete equivalent at sampling period ``T``.

    ``A_d = e^{AT}`` and ``B_d = integral_0^T e^{A tau} B dtau`` are read off
    one exponential of the augmented block ``[[A, B], [0, 0]] * T``; C is
    unchanged.  The augmented route needs no inverse of A, which matters
    here because the plant has an eigenvalue at zero.
    """
    if sys.is_discrete:
        raise ValueError("system is already discrete")
    if not T > 0:
        raise ValueError("sampling period T must be positive")
    n, m = sys.n, sys.B.shape[1]
    block = np.zeros((n + m, n + m))
    block[:n, :n] = sys.A * T
    block[:n, n:] = sys.B * T
    E = mat_exp(block)
    return LinearSystem(A=E[:n, :n], B=E[:n, n:], C=sys.C, dt=T)


def sweep_discretize(sys: LinearSystem, Ts) -> list[LinearSystem]:
    """One ZOH discretization per sampling period, in input order."""
    return [zoh_discretize(sys, T) for T in Ts]
