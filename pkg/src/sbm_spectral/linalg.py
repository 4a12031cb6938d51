"""Symmetric-matrix numerics: Lanczos eigenpairs, norms, projections, angles."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import _kernels
from .errors import ContractError, DegenerateProjectionError, NumericalError

DEFAULT_TOL = 1e-8
_START_SEED = 0x5EED5
_BREAKDOWN = 1e-13


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: float
    vector: np.ndarray
    residual: float = 0.0


@dataclass(frozen=True, eq=False)
class Subspace:
    """Orthonormal basis stored as the columns of ``basis``."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.float64)
        if b.ndim == 1:
            b = b[:, None]
        gram = b.T @ b
        if not np.allclose(gram, np.eye(b.shape[1]), atol=1e-10, rtol=0):
            raise ContractError("subspace basis is not orthonormal")
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, *vectors) -> "Subspace":
        """Orthonormalize ``vectors`` (which must be linearly independent)."""
        mat = np.column_stack([np.asarray(v, dtype=np.float64) for v in vectors])
        q, r = np.linalg.qr(mat)
        if np.min(np.abs(np.diag(r))) < 1e-12 * max(1.0, np.max(np.abs(r))):
            raise ContractError("spanning vectors are linearly dependent")
        return cls(q)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T


def _sign_normalize(v: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(v)))
    return -v if v[idx] < 0 else v


class _Lanczos:
    """Lanczos recurrence with full (twice-applied) reorthogonalization.

    On breakdown the recurrence restarts from a random vector orthogonal to the
    current basis, so T becomes block tridiagonal with zero couplings. This is
    how repeated eigenvalues get found.
    """

    def __init__(self, matvec, dim: int):
        self.matvec = matvec
        self.dim = dim
        self.rng = np.random.default_rng(_START_SEED)
        self.Q = np.empty((dim, min(dim, 64)))
        self.alpha: list[float] = []
        self.beta: list[float] = []  # coupling between column j and j+1
        self.m = 0
        self.segment_start = 0
        self.restarts = 0
        self.last_beta = 0.0
        self._pending_beta = 0.0
        self._next = self._random_unit()

    def _random_unit(self):
        q = self.rng.standard_normal(self.dim)
        for _ in range(2):
            if self.m:
                basis = self.Q[:, : self.m]
                q -= basis @ (basis.T @ q)
        norm = np.linalg.norm(q)
        if norm < 1e-8:
            return None
        return q / norm

    def step(self) -> bool:
        """Add one basis vector. Returns True on breakdown."""
        q = self._next
        if self.m == self.Q.shape[1]:
            grown = np.empty((self.dim, min(self.dim, 2 * self.Q.shape[1])))
            grown[:, : self.m] = self.Q[:, : self.m]
            self.Q = grown
        self.Q[:, self.m] = q
        if self.m:
            self.beta.append(self._pending_beta)
        w = self.matvec(q)
        a = float(q @ w)
        w = w - a * q
        if self._pending_beta:
            w -= self._pending_beta * self.Q[:, self.m - 1]
        basis = self.Q[:, : self.m + 1]
        for _ in range(2):
            w -= basis @ (basis.T @ w)
        b = float(np.linalg.norm(w))
        self.alpha.append(a)
        self.m += 1
        scale = max(1.0, abs(a), self._pending_beta)
        if b <= _BREAKDOWN * scale:
            self.last_beta = 0.0
            return True
        self.last_beta = b
        self._pending_beta = b
        self._next = w / b
        return False

    def restart(self) -> bool:
        q = self._random_unit() if self.m < self.dim else None
        if q is None:
            return False
        self._pending_beta = 0.0
        self.segment_start = self.m
        self.restarts += 1
        self._next = q
        return True

    def tridiag(self, start=0):
        d = np.array(self.alpha[start : self.m])
        e = np.array(self.beta[start : self.m - 1])
        return d, e

    def ritz(self, lo: int, hi: int, start: int = 0):
        """Ritz pairs with ascending indices lo..hi (inclusive) of T[start:, start:]."""
        d, e = self.tridiag(start)
        if d.size == 1:
            vals, vecs = d.copy(), np.ones((1, 1))
        else:
            vals, vecs = eigh_tridiagonal(d, e, select="i", select_range=(lo, hi))
        res = self.last_beta * np.abs(vecs[-1, :])
        return vals, vecs, res

    def all_ritz_values(self):
        d, e = self.tridiag()
        if d.size == 1:
            return d.copy()
        return eigh_tridiagonal(d, e, eigvals_only=True)

    def vectors(self, coeffs: np.ndarray, start: int = 0) -> np.ndarray:
        return self.Q[:, start : self.m] @ coeffs


def _should_check(m: int, nev: int, breakdown: bool, dim: int) -> bool:
    if m < nev:
        return False
    return breakdown or m == dim or m <= 20 or m % 8 == 0


def _as_symmetric(S) -> np.ndarray:
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ContractError("expected a square matrix")
    if not np.allclose(S, S.T, atol=1e-12, rtol=0):
        raise ContractError("matrix is not symmetric")
    return S


def top_k_eigenpairs(S, k: int, tol: float = DEFAULT_TOL, maxiter: int | None = None):
    """The ``k`` algebraically largest eigenpairs, descending.

    Works on ``S + c I`` with ``c`` the largest absolute row sum, so the wanted
    pairs are also the magnitude-extremal ones. Residuals satisfy
    ``||S v - lam v|| <= tol * max(1, ||S||)``; vectors are sign-normalized so
    their largest-magnitude entry is positive.
    """
    S = _as_symmetric(S)
    dim = S.shape[0]
    if not 1 <= k <= dim:
        raise ContractError(f"k must lie in [1, {dim}], got {k}")
    if tol <= 0:
        raise ContractError("tol must be positive")
    shift = float(np.max(np.sum(np.abs(S), axis=1)))
    lz = _Lanczos(lambda v: S @ v + shift * v, dim)
    cap = dim if maxiter is None else min(maxiter, dim)
    best = None
    while True:
        breakdown = lz.step()
        m = lz.m
        if _should_check(m, k, breakdown, dim):
            vals, coeffs, res = lz.ritz(m - k, m - 1)
            norm_est = max(abs(vals[-1] - shift), abs(vals[0] - shift), 1.0)
            all_vals = lz.all_ritz_values() - shift
            norm_est = max(norm_est, abs(all_vals[0]), abs(all_vals[-1]))
            tol_abs = tol * norm_est
            converged = bool(np.all(res <= 0.5 * tol_abs))
            best = (vals, coeffs, res)
            done = False
            if m == dim:
                done = True
            elif breakdown:
                if converged and lz.restarts > 0:
                    seg_vals, _, _ = lz.ritz(m - lz.segment_start - 1, m - lz.segment_start - 1,
                                             start=lz.segment_start)
                    # a broken-down random segment holds the top of the remaining
                    # spectrum; a tie with the k-th value adds nothing new
                    done = seg_vals[-1] <= vals[0] + tol_abs
            elif converged:
                if lz.restarts == 0:
                    done = True
                else:
                    seg_len = m - lz.segment_start
                    _, _, seg_res = lz.ritz(seg_len - 1, seg_len - 1, start=lz.segment_start)
                    done = bool(seg_res[-1] <= 0.5 * tol_abs)
            if done:
                break
        if breakdown and not lz.restart():
            vals, coeffs, res = lz.ritz(m - k, m - 1)
            break
        if m >= cap:
            resid = float(np.max(best[2])) if best is not None else float("inf")
            raise NumericalError(
                f"Lanczos did not converge in {cap} iterations", residual=resid
            )
    vecs = lz.vectors(coeffs)
    pairs = []
    norm_s = max(1.0, float(np.max(np.abs(lz.all_ritz_values() - shift))))
    for j in range(k - 1, -1, -1):
        v = vecs[:, j]
        v = _sign_normalize(v / np.linalg.norm(v))
        lam = float(vals[j] - shift)
        resid = float(np.linalg.norm(S @ v - lam * v))
        if resid > tol * norm_s:
            raise NumericalError(
                f"eigenpair residual {resid:.3e} exceeds tolerance", residual=resid, best=v
            )
        pairs.append(EigenPair(lam, v, resid))
    return pairs


def spectral_norm(S, tol: float = DEFAULT_TOL, maxiter: int | None = None) -> float:
    """max |lambda| of a symmetric matrix, to relative accuracy ``tol``.

    Stops when both extreme Ritz values satisfy ``r**2 / gap <= tol * |theta|``
    (the usual quadratic error estimate for Ritz values).
    """
    S = _as_symmetric(S)
    dim = S.shape[0]
    if tol <= 0:
        raise ContractError("tol must be positive")
    if not np.any(S):
        return 0.0
    lz = _Lanczos(lambda v: S @ v, dim)
    cap = dim if maxiter is None else min(maxiter, dim)
    err = float("inf")
    while True:
        breakdown = lz.step()
        m = lz.m
        if m >= 2 and (breakdown or m == dim or m <= 20 or m % 4 == 0):
            vals = lz.all_ritz_values()
            top = max(abs(vals[0]), abs(vals[-1]))
            lo, lo_vec, lo_res = lz.ritz(0, 1)
            hi, hi_vec, hi_res = lz.ritz(m - 2, m - 1)
            gap_lo = max(lo[1] - lo[0], 1e-300)
            gap_hi = max(hi[1] - hi[0], 1e-300)
            err = max(lo_res[0] ** 2 / gap_lo, lo_res[0] if gap_lo < lo_res[0] else 0.0,
                      hi_res[1] ** 2 / gap_hi, hi_res[1] if gap_hi < hi_res[1] else 0.0)
            if m == dim or err <= 0.5 * tol * top:
                if not breakdown or lz.restarts > 0 or m == dim:
                    return float(top)
        if breakdown and not lz.restart():
            vals = lz.all_ritz_values()
            return float(max(abs(vals[0]), abs(vals[-1])))
        if m >= cap:
            raise NumericalError(
                f"spectral norm did not converge in {cap} iterations", residual=err
            )


def jacobi_eigh(S, tol: float = 1e-14, max_sweeps: int = 100):
    """Dense cyclic Jacobi diagonalization, eigenvalues descending.

    Intended for small matrices (used as an independent check on Lanczos).
    """
    A = np.array(_as_symmetric(S), dtype=np.float64, order="C")
    n = A.shape[0]
    V = np.eye(n)
    scale = max(float(np.sum(A * A)), 1e-300)
    for _ in range(max_sweeps):
        off = _kernels.jacobi_sweep(A, V)
        if off <= tol * tol * scale:
            break
    else:
        raise NumericalError("Jacobi sweeps did not converge", residual=off)
    vals = np.diag(A).copy()
    order = np.argsort(-vals, kind="stable")
    vecs = V[:, order]
    return vals[order], np.column_stack([_sign_normalize(vecs[:, j]) for j in range(n)])


def project_onto(v, W: Subspace) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape[0] != W.ambient:
        raise ContractError("dimension mismatch between vector and subspace")
    return W.basis @ (W.basis.T @ v)


def unit_perp_in_plane(v1, W: Subspace) -> np.ndarray:
    """Unit vector of the 2-D subspace ``W`` orthogonal to ``v1``.

    Sign: the first nonzero coordinate is made positive.
    """
    v1 = np.asarray(v1, dtype=np.float64)
    if W.dim != 2:
        raise ContractError("unit_perp_in_plane needs a two-dimensional subspace")
    norm = np.linalg.norm(v1)
    if norm < 1e-8 * np.sqrt(v1.shape[0]):
        raise DegenerateProjectionError(f"projected vector norm {norm:.3e} is degenerate")
    coords = W.basis.T @ v1
    if np.linalg.norm(W.basis @ coords - v1) > 1e-8 * norm:
        raise ContractError("v1 does not lie in W")
    perp = W.basis @ np.array([-coords[1], coords[0]])
    perp /= np.linalg.norm(perp)
    nz = np.flatnonzero(np.abs(perp) > 1e-12)
    if nz.size and perp[nz[0]] < 0:
        perp = -perp
    return perp


def sin_angle_vectors(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ContractError("angle with a zero vector is undefined")
    u = u / nu
    v = v / nv
    # norm of the component of u orthogonal to v; accurate near 0, unlike sqrt(1 - c^2)
    return float(min(1.0, np.linalg.norm(u - (u @ v) * v)))


def sin_angle_subspaces(W1: Subspace, W2: Subspace) -> float:
    """``||P1 - P2||`` computed as ``max(||(I-P2) B1||, ||(I-P1) B2||)``."""
    if W1.ambient != W2.ambient:
        raise ContractError("subspaces live in different ambient spaces")
    B1, B2 = W1.basis, W2.basis
    r1 = B1 - B2 @ (B2.T @ B1)
    r2 = B2 - B1 @ (B1.T @ B2)
    val = max(np.linalg.norm(r1, 2), np.linalg.norm(r2, 2))
    return float(min(1.0, val))
