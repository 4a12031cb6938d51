"""(sin theta, gamma) frontiers: the Chernoff-constrained program, its
closed-form chain-tight candidate, and Monte Carlo draws of the entry law."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ContractError, NumericalError, ParameterError
from .streams import MC, cell_rng
from .theory import ChernoffConstants, chernoff_constants, cos_objective_all

MAX_GRID_POINTS = 200


@dataclass(frozen=True)
class FrontierPoint:
    sin_theta: float
    gamma: float
    method: str
    n: int
    a: float
    b: float
    k: int | None = None
    rep: int | None = None
    cos_theta: float | None = None

    def __post_init__(self):
        if not (0.0 <= self.sin_theta <= 1.0 and 0.0 <= self.gamma <= 1.0):
            raise ContractError(f"frontier point out of range: {self}")


def default_k_grid(n: int, full: bool = False) -> np.ndarray:
    """Integers in ``[0, n // 2]``, thinned to at most 200 unless ``full``."""
    ks = np.arange(0, n // 2 + 1)
    if full or ks.size <= MAX_GRID_POINTS:
        return ks
    return np.unique(np.round(np.linspace(0, n // 2, MAX_GRID_POINTS)).astype(np.intp))


def block_signs(n: int, k: int) -> np.ndarray:
    """+1 / -1 / +1 / -1 over blocks of length n-k, k, k, n-k."""
    s = np.ones(2 * n)
    s[n - k : n] = -1.0
    s[n + k :] = -1.0
    return s


def chain_tight_candidate(n: int, a: float, b: float, k: int,
                          constants: ChernoffConstants | None = None) -> np.ndarray:
    """Outer blocks follow the entry bounds with every ratio constraint tight;
    the middle ``2k`` entries are zero. Unit norm and antisymmetric."""
    if not 0 <= k < n:
        raise ContractError(f"need 0 <= k < n, got {k}")
    cc = constants if constants is not None else chernoff_constants(n, a, b)
    head = cc.level - np.log(np.arange(1, n - k + 1, dtype=np.float64))
    x = np.zeros(2 * n)
    x[: n - k] = head
    x[n + k :] = -head[::-1]
    return x / np.linalg.norm(x)


@dataclass(frozen=True, eq=False)
class ChernoffProgram:
    """maximize cos_objective(x, k) over the unit ball, the two ratio-constraint
    families, and (when ``enforce_order``) the ordering ``x_i >= x_{i+1}``."""

    n: int
    constants: ChernoffConstants
    k: int
    enforce_order: bool = True

    def __post_init__(self):
        if not 0 <= self.k < self.n:
            raise ContractError(f"need 0 <= k < n, got {self.k}")
        if self.constants.n != self.n:
            raise ContractError("constants were computed for a different n")

    @classmethod
    def build(cls, n, a, b, k, enforce_order=True):
        return cls(n, chernoff_constants(n, a, b), k, enforce_order)

    @property
    def signs(self) -> np.ndarray:
        return block_signs(self.n, self.k)

    @property
    def c(self) -> np.ndarray:
        return self.signs / math.sqrt(2 * self.n)

    def constraints(self):
        """``(left, alpha, beta)``: row j reads
        ``alpha_j x[left_j] + beta_j x[left_j + 1] <= 0``."""
        n = self.n
        cc = self.constants
        lefts = [np.arange(0, n - 1), np.arange(n, 2 * n - 1)]
        alphas = [-cc.upper_ratios, -np.ones(n - 1)]
        betas = [np.ones(n - 1), cc.lower_ratios]
        if self.enforce_order:
            lefts.append(np.arange(0, 2 * n - 1))
            alphas.append(-np.ones(2 * n - 1))
            betas.append(np.ones(2 * n - 1))
        return (np.concatenate(lefts).astype(np.intp), np.concatenate(alphas),
                np.concatenate(betas))

    def feasibility_residual(self, x) -> float:
        left, alpha, beta = self.constraints()
        g = alpha * x[left] + beta * x[left + 1]
        norm_excess = max(0.0, float(np.linalg.norm(x)) - 1.0)
        return max(0.0, float(np.max(g, initial=0.0)), norm_excess)


@dataclass(frozen=True, eq=False)
class SolverResult:
    x: np.ndarray
    objective: float
    kkt_residual: float
    iterations: int
    multipliers: np.ndarray = field(repr=False, default=None)


class _Constraints:
    def __init__(self, left, alpha, beta, size):
        self.left, self.alpha, self.beta, self.size = left, alpha, beta, size

    def apply(self, x):
        return self.alpha * x[self.left] + self.beta * x[self.left + 1]

    def apply_t(self, lam):
        out = np.bincount(self.left, self.alpha * lam, minlength=self.size)
        out += np.bincount(self.left + 1, self.beta * lam, minlength=self.size)
        return out

    def normal_matrix(self, d):
        """Tridiagonal ``I + G^T diag(d) G`` as (off, diag)."""
        diag = 1.0 + np.bincount(self.left, d * self.alpha**2, minlength=self.size)
        diag += np.bincount(self.left + 1, d * self.beta**2, minlength=self.size)
        off = np.bincount(self.left, d * self.alpha * self.beta, minlength=self.size - 1)
        return off[: self.size - 1], diag


def _max_step(v, dv):
    neg = dv < 0
    if not np.any(neg):
        return 1.0
    return float(min(1.0, np.min(-v[neg] / dv[neg])))


def _project_onto_cone(c, G: _Constraints, tol, maxiter):
    """Mehrotra predictor-corrector on ``min 1/2 ||x - c||^2  s.t.  G x <= 0``."""
    m = G.left.size
    x = c.copy()
    w = np.ones(m)
    lam = np.ones(m)
    best = None
    for it in range(1, maxiter + 1):
        rd = x - c + G.apply_t(lam)
        rp = G.apply(x) + w
        mu = float(w @ lam) / m
        res = max(float(np.max(np.abs(rd))), float(np.max(np.abs(rp))), float(np.max(w * lam)))
        if best is None or res < 0.5 * best[0]:
            best = (res, x.copy(), lam.copy(), it)
        elif res < best[0]:
            best = (res, x.copy(), lam.copy(), best[3])
        if res <= tol:
            return x, lam, it, res
        if it - best[3] > 8:
            break  # no progress for several iterations
        with np.errstate(over="ignore", divide="ignore"):
            d = lam / w
        if not np.all(np.isfinite(d)):
            break
        off, diag = G.normal_matrix(d)

        def newton(rc):
            rhs = -rd - G.apply_t((-rc + lam * rp) / w)
            dx = _kernels.solve_tridiagonal(off, diag, off, rhs)
            dw = -rp - G.apply(dx)
            dl = (-rc - lam * dw) / w
            return dx, dw, dl

        try:
            dx, dw, dl = newton(w * lam)
            a_aff = min(_max_step(w, dw), _max_step(lam, dl))
            mu_aff = float((w + a_aff * dw) @ (lam + a_aff * dl)) / m
            sigma = (mu_aff / mu) ** 3 if mu > 0 else 0.0
            dx, dw, dl = newton(w * lam + dw * dl - sigma * mu)
        except ZeroDivisionError:
            break  # Newton matrix lost precision; the caller certifies the best iterate
        if not (np.all(np.isfinite(dx)) and np.all(np.isfinite(dl))):
            break
        step = 0.995 * min(_max_step(w, dw), _max_step(lam, dl))
        step = min(step, 1.0)
        x = x + step * dx
        w = w + step * dw
        lam = lam + step * dl
    res, x, lam, _ = best
    return x, lam, it, res


def solve_chernoff_program(prog: ChernoffProgram, tol: float = 1e-9, maxiter: int = 200) -> SolverResult:
    """Maximize the block objective over the constraint cone and the unit ball.

    All linear constraints are homogeneous, so the feasible set is a cone K cut
    by the ball, and the maximizer is ``P_K(c) / ||P_K(c)||`` with optimal value
    ``||P_K(c)||``. ``P_K(c)`` comes from a primal-dual log-barrier method whose
    Newton systems are tridiagonal.
    """
    size = 2 * prog.n
    left, alpha, beta = prog.constraints()
    G = _Constraints(left, alpha, beta, size)
    c = prog.c
    xp, lam, iterations, _ = _project_onto_cone(c, G, tol=1e-2 * tol, maxiter=maxiter)
    scale = float(np.linalg.norm(xp))
    if scale <= tol:
        x = np.zeros(size)
        objective = 0.0
        nu = 0.0
    else:
        x = xp / scale
        objective = float(c @ x)
        nu = scale
    gx = G.apply(x)
    kkt = max(
        float(np.max(np.abs(c - G.apply_t(lam) - nu * x))),
        float(np.max(np.abs(lam * gx))),
        prog.feasibility_residual(x),
    )
    if kkt > tol:
        raise NumericalError(f"KKT residual {kkt:.3e} above tolerance {tol:.1e}",
                             residual=kkt, best=x)
    return SolverResult(x, objective, kkt, iterations, lam)


def _point_from_cos(cos, gamma, method, n, a, b, k=None, rep=None):
    cos = float(min(1.0, max(0.0, cos)))
    return FrontierPoint(math.sqrt(max(0.0, 1.0 - cos * cos)), float(gamma), method,
                         n, a, b, k=None if k is None else int(k), rep=rep, cos_theta=cos)


def chernoff_frontier(n: int, a: float, b: float, k_list=None, tol: float = 1e-9,
                      enforce_order: bool = True) -> list[FrontierPoint]:
    cc = chernoff_constants(n, a, b)
    ks = default_k_grid(n) if k_list is None else np.asarray(k_list, dtype=np.intp)
    points = []
    for k in ks:
        res = solve_chernoff_program(ChernoffProgram(n, cc, int(k), enforce_order), tol)
        points.append(_point_from_cos(res.objective, k / n, "chernoff-opt", n, a, b, k=k))
    return points


def sample_Y(n: int, a: float, b: float, rng: np.random.Generator, size=None):
    """Exact draw(s) of ``Bin(n, a/n) - Bin(n, b/n)``."""
    if not (0 <= a <= n and 0 <= b <= n):
        raise ParameterError("need 0 <= a, b <= n")
    return rng.binomial(n, a / n, size) - rng.binomial(n, b / n, size)


def mc_vector(n: int, a: float, b: float, rng: np.random.Generator) -> np.ndarray:
    """``n`` draws of Y and ``n`` independent draws of -Y, sorted descending,
    scaled to unit norm (left at zero if every draw is zero)."""
    y = sample_Y(n, a, b, rng, size=n)
    z = -sample_Y(n, a, b, rng, size=n)
    x = np.sort(np.concatenate([y, z]).astype(np.float64))[::-1]
    norm = np.linalg.norm(x)
    return x / norm if norm > 0 else x


def mc_frontier(n: int, a: float, b: float, reps: int, seed: int, k_list=None) -> list[FrontierPoint]:
    """Every (rep, k) point of the Monte Carlo band. Rep ``r`` draws from the
    stream ``(seed, MC, n, r)``."""
    if reps < 1:
        raise ContractError("reps must be at least 1")
    ks = default_k_grid(n) if k_list is None else np.asarray(k_list, dtype=np.intp)
    points = []
    for rep in range(reps):
        x = mc_vector(n, a, b, cell_rng(seed, MC, n, rep))
        cos = cos_objective_all(x, ks)
        for k, c in zip(ks, cos):
            points.append(_point_from_cos(c, k / n, "mc", n, a, b, k=k, rep=rep))
    return points


def median_by_k(points) -> dict[int, float]:
    """Median sin(theta) per k over a band of points."""
    by_k: dict[int, list[float]] = {}
    for p in points:
        by_k.setdefault(p.k, []).append(p.sin_theta)
    return {k: float(np.median(v)) for k, v in sorted(by_k.items())}
