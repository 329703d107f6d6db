"""Thomas algorithm for tridiagonal systems.

Band storage: ``lower[i]`` multiplies x[i-1] in row i (lower[0] unused),
``upper[i]`` multiplies x[i+1] in row i (upper[-1] unused).
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _thomas(lower, diag, upper, rhs):
    n = diag.shape[0]
    c = np.empty(n)
    x = np.empty(n)
    beta = diag[0]
    c[0] = upper[0] / beta
    x[0] = rhs[0] / beta
    for i in range(1, n):
        beta = diag[i] - lower[i] * c[i - 1]
        c[i] = upper[i] / beta
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / beta
    for i in range(n - 2, -1, -1):
        x[i] -= c[i] * x[i + 1]
    return x


def thomas(lower, diag, upper, rhs) -> np.ndarray:
    """Solve the tridiagonal system without pivoting.

    Stable for diagonally dominant matrices, which is all this package builds.
    """
    arrays = (lower, diag, upper, rhs)
    if all(isinstance(a, np.ndarray) and a.dtype == np.float64 and a.flags.c_contiguous for a in arrays):
        return _thomas(*arrays)
    return _thomas(
        np.ascontiguousarray(lower, dtype=np.float64),
        np.ascontiguousarray(diag, dtype=np.float64),
        np.ascontiguousarray(upper, dtype=np.float64),
        np.ascontiguousarray(rhs, dtype=np.float64),
    )


def tridiag_matvec(lower, diag, upper, x) -> np.ndarray:
    y = diag * x
    y[1:] += lower[1:] * x[:-1]
    y[:-1] += upper[:-1] * x[1:]
    return y


def neumann_laplacian_bands(n: int, h: float):
    """Second-difference bands with ghost-node closure u[-1] = u[1], u[n+1] = u[n-1]."""
    m = n + 1
    inv_h2 = 1.0 / (h * h)
    lower = np.full(m, inv_h2)
    upper = np.full(m, inv_h2)
    diag = np.full(m, -2.0 * inv_h2)
    lower[0] = 0.0
    upper[-1] = 0.0
    upper[0] = 2.0 * inv_h2
    lower[-1] = 2.0 * inv_h2
    return lower, diag, upper
