"""Pure-Python versions of the compiled kernels.

Used when the extension is not built, or when ``SBM_SPECTRAL_PURE=1``.
"""
import math

import numpy as np


def solve_tridiagonal(lower, diag, upper, rhs):
    """Thomas algorithm on plain Python floats."""
    diag = [float(d) for d in diag]
    lower = [float(v) for v in lower]
    upper = [float(v) for v in upper]
    rhs = [float(v) for v in rhs]
    n = len(diag)
    if len(rhs) != n or len(lower) != n - 1 or len(upper) != n - 1:
        raise ValueError("inconsistent tridiagonal system shapes")
    if n == 0:
        return np.empty(0)
    cp = [0.0] * max(n - 1, 1)
    x = [0.0] * n
    if diag[0] == 0.0:
        raise ZeroDivisionError("zero pivot in tridiagonal solve")
    if n > 1:
        cp[0] = upper[0] / diag[0]
    x[0] = rhs[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - lower[i - 1] * cp[i - 1]
        if denom == 0.0:
            raise ZeroDivisionError("zero pivot in tridiagonal solve")
        if i < n - 1:
            cp[i] = upper[i] / denom
        x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / denom
    for i in range(n - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return np.array(x)


def jacobi_sweep(a, v):
    """One cyclic Jacobi sweep, in place. Returns off-diagonal squared norm."""
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            if apq == 0.0:
                continue
            theta = float(a[q, q] - a[p, p]) / (2.0 * float(apq))
            if abs(theta) > 1e150:
                t = 0.5 / theta  # theta**2 would overflow
            elif theta >= 0:
                t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
            else:
                t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            col_p = a[:, p].copy()
            col_q = a[:, q].copy()
            a[:, p] = c * col_p - s * col_q
            a[:, q] = s * col_p + c * col_q
            row_p = a[p, :].copy()
            row_q = a[q, :].copy()
            a[p, :] = c * row_p - s * row_q
            a[q, :] = s * row_p + c * row_q
            vp = v[:, p].copy()
            vq = v[:, q].copy()
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
    off = a - np.diag(np.diag(a))
    return float(np.sum(off * off))
