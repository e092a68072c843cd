"""Small dense complex solvers with explicit pivot-size semantics.

The defining system of the interpolant is tiny (k <= 8 at desk scale)
but its singularity must be *reported*, not papered over: a pivot whose
magnitude falls below ``rtol`` times the largest initial row magnitude
raises :class:`SingularSystemError`.  Determinants share the elimination
kernel so both paths agree on what "singular" means.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularSystemError

PIVOT_RTOL = 1e-13


def _eliminate(a: np.ndarray, rtol: float):
    """Row-pivoted forward elimination, in place.

    Returns (permutation sign, smallest accepted pivot magnitude).
    Raises SingularSystemError the moment a pivot is relatively tiny.
    """
    n = a.shape[0]
    scale = float(np.max(np.abs(a[:, :n]))) if n else 0.0
    if n and scale == 0.0:
        raise SingularSystemError("coefficient matrix is identically zero")
    sign = 1.0
    min_pivot = np.inf
    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(a[col:, col])))
        pivot = abs(a[pivot_row, col])
        if pivot <= rtol * scale:
            raise SingularSystemError(
                f"pivot {pivot:.3e} below {rtol:.0e} x scale {scale:.3e} "
                f"at column {col}"
            )
        min_pivot = min(min_pivot, pivot)
        if pivot_row != col:
            a[[col, pivot_row]] = a[[pivot_row, col]]
            sign = -sign
        factors = a[col + 1:, col] / a[col, col]
        a[col + 1:, col:] -= np.outer(factors, a[col, col:])
        a[col + 1:, col] = 0.0
    return sign, (0.0 if n == 0 else float(min_pivot))


def solve_pivoted(a, b, rtol: float = PIVOT_RTOL):
    """Solve ``a x = b``; returns (x, smallest pivot magnitude).

    ``b`` may be a vector or a matrix of stacked right-hand sides.
    """
    a = np.array(a, dtype=complex)
    b_arr = np.array(b, dtype=complex)
    vector_rhs = b_arr.ndim == 1
    if vector_rhs:
        b_arr = b_arr[:, None]
    n = a.shape[0]
    if a.shape != (n, n) or b_arr.shape[0] != n:
        raise ValueError(f"shape mismatch: a {a.shape}, b {b_arr.shape}")
    if n == 0:
        empty = np.zeros((0,) if vector_rhs else (0, b_arr.shape[1]), complex)
        return empty, 0.0
    aug = np.hstack([a, b_arr])
    _, min_pivot = _eliminate(aug, rtol)
    x = np.zeros_like(b_arr)
    for i in range(n - 1, -1, -1):
        x[i] = (aug[i, n:] - aug[i, i + 1:n] @ x[i + 1:]) / aug[i, i]
    return (x[:, 0] if vector_rhs else x), min_pivot


def det_pivoted(a, rtol: float = 0.0) -> complex:
    """Determinant by the same elimination; empty matrix gives 1.

    With the default ``rtol=0`` an exactly-singular matrix returns 0
    instead of raising (cofactor values of 0 are legitimate data).
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"determinant needs a square matrix, got {a.shape}")
    if n == 0:
        return 1.0 + 0.0j
    if float(np.max(np.abs(a))) == 0.0:
        return 0.0 + 0.0j
    try:
        sign, _ = _eliminate(a, rtol)
    except SingularSystemError:
        if rtol == 0.0:
            return 0.0 + 0.0j
        raise
    return complex(sign * np.prod(np.diag(a)))
