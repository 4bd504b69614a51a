"""Pole placement through the controllable canonical form.

The gain is synthesized in three moves: extract the open-loop characteristic
coefficients, transform to the companion realization through ``Phi = Ctrb *
Gamma``, and subtract coefficients.  In the companion form the closed-loop
characteristic polynomial is read straight off the last row, so each gain
entry is the difference between a desired and an open-loop coefficient; the
physical-coordinate gain is recovered as ``K = K_hat * inv(Phi)``.  Every
synthesized gain is verified by an eigenvalue check on the closed loop
before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_RANK_TOL, char_poly, inverse, poly_from_roots, rank
from .model import LinearSystem

__all__ = [
    "UncontrollableError",
    "SynthesisError",
    "GainSpec",
    "CanonicalDecomposition",
    "gamma_matrix",
    "canonical_transform",
    "place",
    "map_poles_s_to_z",
    "feedforward_gain",
    "sort_poles",
    "VERIFY_TOL",
]

# Bound on the closed-loop eigenvalue multiset mismatch before a gain is
# rejected as a synthesis failure.
VERIFY_TOL = 1e-6


class UncontrollableError(ValueError):
    """Raised when the canonical transform is attempted on an uncontrollable pair."""


class SynthesisError(RuntimeError):
    """Raised when a synthesized gain fails its closed-loop verification."""


def sort_poles(poles) -> tuple[complex, ...]:
    """Canonical multiset order: by real part, then imaginary part."""
    return tuple(sorted((complex(p) for p in poles), key=lambda z: (z.real, z.imag)))


@dataclass(frozen=True, eq=False)
class GainSpec:
    """A synthesized state-feedback gain and its verification record.

    ``dt`` mirrors :class:`~cartpend.model.LinearSystem`: ``None`` for a
    continuous design, the sampling period for a discrete one.  ``residual``
    is the largest deviation found during verification (normalized
    coefficient mismatch and eigenvalue multiset distance).
    """

    desired_poles: tuple[complex, ...]
    K: np.ndarray
    dt: float | None
    achieved_poles: tuple[complex, ...]
    residual: float
    psi: float | None = None


@dataclass(frozen=True, eq=False)
class CanonicalDecomposition:
    """Pieces of the canonical-form construction for one system.

    ``gamma`` holds the open-loop characteristic coefficients, ``Gamma`` the
    coefficient array built from them, ``Phi = Ctrb * Gamma`` the similarity
    to companion form.  ``gamma_bar`` and ``K_hat`` are filled in by
    :func:`place`.
    """

    gamma: np.ndarray
    Gamma: np.ndarray
    Phi: np.ndarray
    gamma_bar: np.ndarray | None = None
    K_hat: np.ndarray | None = None


def gamma_matrix(coeffs) -> np.ndarray:
    """Coefficient array pairing the controllability matrix with companion form.

    For monic coefficients ``[1, c1, ..., cn]`` the n-by-n result has
    ``c_{n-1-i-j}`` at (i, j), counting ``c_0 = 1``; the anti-diagonal is all
    ones and everything below it is zero.
    """
    coeffs = np.asarray(coeffs, dtype=float).reshape(-1)
    n = coeffs.size - 1
    if n < 1:
        raise ValueError("polynomial degree must be at least 1")
    if coeffs[0] != 1.0:
        raise ValueError("polynomial must be monic")
    if not np.all(np.isfinite(coeffs)):
        raise ValueError("polynomial coefficients must be finite")
    G = np.zeros((n, n))
    for i in range(n):
        for j in range(n - i):
            k = n - 1 - i - j
            G[i, j] = 1.0 if k == 0 else coeffs[k]
    return G


def _controllability(sys: LinearSystem) -> np.ndarray:
    # Local stack to avoid a properties<->placement import cycle.
    if sys.B.shape[1] != 1:
        raise ValueError(f"expected a single input column, got {sys.B.shape[1]}")
    cols = [sys.B]
    for _ in range(sys.n - 1):
        cols.append(sys.A @ cols[-1])
    return np.hstack(cols)


def canonical_transform(
    sys: LinearSystem, tol: float = DEFAULT_RANK_TOL
) -> CanonicalDecomposition:
    """Build ``Phi`` taking the system to controllable canonical form.

    Raises
    ------
    UncontrollableError
        If the controllability matrix is rank-deficient (``Phi`` would be
        singular).
    """
    ctrb = _controllability(sys)
    n = sys.n
    if rank(ctrb, tol) < n:
        raise UncontrollableError(
            f"system is not controllable at tolerance {tol:g}; cannot transform"
        )
    gamma = char_poly(sys.A)
    Gamma = gamma_matrix(gamma)
    Phi = ctrb @ Gamma
    return CanonicalDecomposition(gamma=gamma, Gamma=Gamma, Phi=Phi)


def place(sys: LinearSystem, desired, tol: float = DEFAULT_RANK_TOL) -> GainSpec:
    """Feedback gain K so that ``A - B K`` has the desired pole multiset.

    Works identically for continuous and discrete systems; the returned
    spec is tagged with the system's time domain.  The gain is accepted only
    if the closed-loop eigenvalues reproduce the desired multiset.

    Parameters
    ----------
    sys : LinearSystem
        Controllable single-input system.
    desired : iterable of complex
        Exactly n poles, closed under conjugation; repeats are allowed.

    Raises
    ------
    UncontrollableError
        If the system is not controllable.
    SynthesisError
        If the synthesized gain fails verification at ``VERIFY_TOL``.
    """
    desired = sort_poles(desired)
    n = sys.n
    if len(desired) != n:
        raise ValueError(f"need exactly {n} desired poles, got {len(desired)}")
    gamma_bar = poly_from_roots(desired)

    decomp = canonical_transform(sys, tol)
    gamma = decomp.gamma
    # k_hat_j pairs with coefficient gamma_{n+1-j}: desired minus open-loop.
    k_hat = (gamma_bar[1:] - gamma[1:])[::-1]
    K = (k_hat @ inverse(decomp.Phi)).reshape(1, n)

    # Eigen-check on an independent (backward-stable) route; the coefficient
    # recurrence would overstate the mismatch for large-norm closed loops.
    achieved = sort_poles(np.linalg.eigvals(sys.A - sys.B @ K))
    eig_resid = float(max(abs(a - d) for a, d in zip(achieved, desired)))
    if eig_resid > VERIFY_TOL:
        raise SynthesisError(
            f"closed-loop eigenvalue mismatch {eig_resid:.3e} exceeds {VERIFY_TOL:g}"
        )
    return GainSpec(
        desired_poles=desired,
        K=K,
        dt=sys.dt,
        achieved_poles=achieved,
        residual=eig_resid,
    )


def map_poles_s_to_z(poles, T: float) -> tuple[complex, ...]:
    """Map continuous poles to the discrete plane via ``z = exp(s T)``."""
    if not T > 0:
        raise ValueError("sampling period T must be positive")
    return sort_poles(np.exp(np.asarray(poles, dtype=complex) * T))


def feedforward_gain(sys: LinearSystem, K, output_index: int = 0) -> float:
    """Reference gain giving unit DC gain on one output channel.

    Continuous systems use ``1 / (C_row (BK - A)^-1 B)``; discrete systems
    use ``1 / (C_row (I - A + BK)^-1 B)``.  A closed-loop pole at ``s = 0``
    (``z = 1``) makes the DC gain unbounded and is rejected.
    """
    K = np.asarray(K, dtype=float).reshape(1, sys.n)
    if not 0 <= output_index < sys.C.shape[0]:
        raise ValueError(f"output_index {output_index} out of range")
    c_row = sys.C[output_index : output_index + 1]
    if sys.is_discrete:
        core = np.eye(sys.n) - sys.A + sys.B @ K
    else:
        core = sys.B @ K - sys.A
    try:
        dc = float((c_row @ inverse(core) @ sys.B)[0, 0])
    except Exception as exc:
        raise ValueError(f"closed-loop DC structure is singular: {exc}") from exc
    if abs(dc) < 1e-12:
        raise ValueError("closed-loop DC gain is ~0; feedforward undefined")
    return 1.0 / dc
