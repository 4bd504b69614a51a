"""Controllability and observability analysis by matrix rank."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_RANK_TOL, rank
from .model import LinearSystem

__all__ = [
    "PropertyReport",
    "controllability_matrix",
    "observability_matrix",
    "check",
]


@dataclass(frozen=True, eq=False)
class PropertyReport:
    """Outcome of one rank test: the tested matrix, its rank, and the verdict."""

    matrix: np.ndarray
    rank: int
    required: int
    holds: bool
    tol: float


def controllability_matrix(sys: LinearSystem) -> np.ndarray:
    """Stack ``[B, AB, ..., A^(n-1)B]`` for a single-input system."""
    if sys.B.shape[1] != 1:
        raise ValueError(f"expected a single input column, got {sys.B.shape[1]}")
    cols = [sys.B]
    for _ in range(sys.n - 1):
        cols.append(sys.A @ cols[-1])
    return np.hstack(cols)


def observability_matrix(sys: LinearSystem) -> np.ndarray:
    """Stack ``[C; CA; ...; CA^(n-1)]``."""
    rows = [sys.C]
    for _ in range(sys.n - 1):
        rows.append(rows[-1] @ sys.A)
    return np.vstack(rows)


def check(
    sys: LinearSystem, tol: float = DEFAULT_RANK_TOL
) -> tuple[PropertyReport, PropertyReport]:
    """Rank tests for controllability and observability.

    Either property holds iff the corresponding matrix reaches rank n.
    Returns ``(controllability_report, observability_report)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = sys.n
    cm = controllability_matrix(sys)
    om = observability_matrix(sys)
    r_c = rank(cm, tol)
    r_o = rank(om, tol)
    return (
        PropertyReport(matrix=cm, rank=r_c, required=n, holds=r_c == n, tol=tol),
        PropertyReport(matrix=om, rank=r_o, required=n, holds=r_o == n, tol=tol),
    )
