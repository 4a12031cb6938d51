# Compiled versions of the inner loops in _fallback.py. Keep the two in sync.
from libc.math cimport sqrt, fabs


def solve_tridiagonal(double[::1] lower, double[::1] diag, double[::1] upper,
                      double[::1] rhs):
    """Thomas algorithm. Returns a new array; inputs are not modified."""
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i
    cdef double denom
    if rhs.shape[0] != n or lower.shape[0] != n - 1 or upper.shape[0] != n - 1:
        raise ValueError("inconsistent tridiagonal system shapes")
    import numpy as np
    cp_arr = np.empty(max(n - 1, 1), dtype=np.float64)
    x_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] cp = cp_arr
    cdef double[::1] x = x_arr
    if n == 0:
        return x_arr
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
    return x_arr


def jacobi_sweep(double[:, ::1] a, double[:, ::1] v):
    """One cyclic Jacobi sweep over all (p, q), p < q, in place.

    Returns the squared Frobenius norm of the off-diagonal part afterwards.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef double apq, theta, t, c, s, x, y, off
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            if apq == 0.0:
                continue
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            if fabs(theta) > 1e150:
                t = 0.5 / theta  # theta**2 would overflow
            elif theta >= 0:
                t = 1.0 / (theta + sqrt(theta * theta + 1.0))
            else:
                t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
            c = 1.0 / sqrt(t * t + 1.0)
            s = t * c
            for k in range(n):
                x = a[k, p]
                y = a[k, q]
                a[k, p] = c * x - s * y
                a[k, q] = s * x + c * y
            for k in range(n):
                x = a[p, k]
                y = a[q, k]
                a[p, k] = c * x - s * y
                a[q, k] = s * x + c * y
            for k in range(n):
                x = v[k, p]
                y = v[k, q]
                v[k, p] = c * x - s * y
                v[k, q] = s * x + c * y
    off = 0.0
    for p in range(n):
        for q in range(n):
            if p != q:
                off += a[p, q] * a[p, q]
    return off
