"""Small dense real-matrix kernel.

Supplies exactly the numerics the rest of the package needs: characteristic
polynomial, polynomial-from-roots, matrix exponential, inverse, and numerical
rank.  Matrices are plain float64 ``numpy.ndarray`` values; polynomials are
1-D coefficient arrays in descending powers with a leading 1 (monic).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SingularMatrixError",
    "UnpairedRootError",
    "char_poly",
    "poly_from_roots",
    "mat_exp",
    "inverse",
    "rank",
    "DEFAULT_RANK_TOL",
]

DEFAULT_RANK_TOL = 1e-9

# Degree cap for char_poly; the recurrence loses accuracy for large n.
MAX_CHAR_POLY_DIM = 8

# Truncation threshold for the scaled exponential series.
_SERIES_TOL = 1e-16

# Relative pivot threshold below which elimination treats a matrix as singular.
_PIVOT_REL_TOL = 1e-13


class SingularMatrixError(ValueError):
    """Raised when a matrix is singular within the pivot tolerance."""


class UnpairedRootError(ValueError):
    """Raised when a complex root multiset is not closed under conjugation."""


def _as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def _as_square(a, name: str = "matrix") -> np.ndarray:
    m = _as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def _inf_norm(a: np.ndarray) -> float:
    if a.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(a), axis=1)))


def char_poly(A, max_dim: int = MAX_CHAR_POLY_DIM) -> np.ndarray:
    """Monic characteristic polynomial of a square matrix.

    Uses the Faddeev-LeVerrier recurrence, which needs only matrix products
    and traces and is well behaved at the small dimensions used here.

    Parameters
    ----------
    A : array_like
        Square matrix, side at most ``max_dim``.

    Returns
    -------
    ndarray
        Coefficients ``[1, c1, ..., cn]`` of ``det(sI - A)`` in descending
        powers of ``s``.
    """
    A = _as_square(A, "A")
    n = A.shape[0]
    if n > max_dim:
        raise ValueError(f"matrix side {n} exceeds supported maximum {max_dim}")
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    M = np.eye(n)
    for k in range(1, n + 1):
        AM = A @ M
        c = -np.trace(AM) / k
        coeffs[k] = c
        M = AM + c * np.eye(n)
    return coeffs


def poly_from_roots(roots, tol: float = 1e-8) -> np.ndarray:
    """Monic real polynomial with the given root multiset.

    Parameters
    ----------
    roots : iterable of complex
        Root multiset; must be closed under complex conjugation.
    tol : float
        Relative bound on the residual imaginary parts of the expanded
        coefficients before the multiset is rejected as unpaired.

    Returns
    -------
    ndarray
        Real coefficients ``[1, c1, ..., cn]`` in descending powers.
    """
    rts = np.atleast_1d(np.asarray(roots, dtype=complex))
    if rts.ndim != 1 or rts.size == 0:
        raise ValueError("roots must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(rts)):
        raise ValueError("roots must be finite")
    coeffs = np.array([1.0 + 0.0j])
    for r in rts:
        coeffs = np.convolve(coeffs, np.array([1.0, -r]))
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    imag_resid = float(np.max(np.abs(coeffs.imag)))
    if imag_resid > tol * scale:
        raise UnpairedRootError(
            f"roots are not conjugate-closed (imaginary residual {imag_resid:.3e})"
        )
    return coeffs.real.copy()


def mat_exp(A) -> np.ndarray:
    """Matrix exponential ``e^A`` by scaling and squaring.

    The argument is scaled so its infinity norm is at most 0.5, the Taylor
    series is summed until the next term drops below ``1e-16`` in norm, and
    the result is squared back up.
    """
    A = _as_square(A, "A")
    n = A.shape[0]
    norm = _inf_norm(A)
    squarings = 0
    if norm > 0.5:
        squarings = int(np.ceil(np.log2(norm / 0.5)))
    As = A / (2.0**squarings)
    E = np.eye(n)
    term = np.eye(n)
    k = 1
    while True:
        term = term @ As / k
        E = E + term
        if _inf_norm(term) < _SERIES_TOL:
            break
        k += 1
        if k > 64:  # ||As|| <= 0.5 converges long before this
            break
    with np.errstate(over="ignore"):  # overflow is reported as an error below
        for _ in range(squarings):
            E = E @ E
    if not np.all(np.isfinite(E)):
        raise ValueError("matrix exponential overflowed to non-finite entries")
    return E


def inverse(A) -> np.ndarray:
    """Matrix inverse by Gaussian elimination with partial pivoting.

    Raises
    ------
    SingularMatrixError
        If a pivot falls below the relative tolerance.
    """
    A = _as_square(A, "A")
    n = A.shape[0]
    scale = float(np.max(np.abs(A))) if n else 0.0
    threshold = _PIVOT_REL_TOL * max(scale, 1.0)
    aug = np.hstack([A.copy(), np.eye(n)])
    for col in range(n):
        p = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[p, col]) <= threshold:
            raise SingularMatrixError(f"pivot {aug[p, col]:.3e} below tolerance")
        if p != col:
            aug[[col, p]] = aug[[p, col]]
        aug[col] /= aug[col, col]
        for r in range(n):
            if r != col and aug[r, col] != 0.0:
                aug[r] -= aug[r, col] * aug[col]
    return aug[:, n:]


def rank(A, tol: float = DEFAULT_RANK_TOL) -> int:
    """Numerical rank via row echelon reduction with partial pivoting.

    A pivot counts if its magnitude exceeds ``tol`` times the largest
    absolute entry of the input.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    R = _as_matrix(A, "A").copy()
    rows, cols = R.shape
    threshold = tol * (float(np.max(np.abs(R))) if R.size else 0.0)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[p, c]) <= threshold:
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r + 1 :] -= np.outer(R[r + 1 :, c] / R[r, c], R[r])
        r += 1
    return r
