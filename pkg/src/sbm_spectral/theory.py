"""Closed-form quantities: Chernoff constants, log-MGFs, the quadratic bound,
the sharpness construction, the sorted-block cosine objective and the two
closed-form frontier predictions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ContractError, ParameterError

SORT_TOL = 1e-9


def phi(x):
    """Standard normal density."""
    x = np.asarray(x, dtype=np.float64)
    out = np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    return out if out.ndim else float(out)


def Phi(x):
    """Standard normal CDF."""
    out = special.ndtr(np.asarray(x, dtype=np.float64))
    return out if np.ndim(out) else float(out)


def Phi_inv(p):
    """Standard normal quantile; ``p`` must lie strictly inside (0, 1)."""
    p = np.asarray(p, dtype=np.float64)
    if np.any((p <= 0) | (p >= 1)) or np.any(np.isnan(p)):
        raise ParameterError("Phi_inv needs 0 < p < 1")
    out = special.ndtri(p)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True, eq=False)
class ChernoffConstants:
    n: int
    p_a: float
    q_a: float
    p_b: float
    q_b: float
    t_star: float
    ln_C: float
    upper_ratios: np.ndarray  # r_i, i = 1..n-1
    lower_ratios: np.ndarray  # s_i, i = n+1..2n-1

    @property
    def level(self) -> float:
        """``ln C + ln(2n+1)``, the common offset in every entry bound."""
        return self.ln_C + math.log(2 * self.n + 1)


def _check_nab(n, a, b):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    if not 0 < b < a < n:
        raise ParameterError(f"need 0 < b < a < n, got n={n}, a={a}, b={b}")


def chernoff_constants(n: int, a: float, b: float) -> ChernoffConstants:
    """Optimal Chernoff parameter, log concentration constant and ratio bounds.

    ``C`` overflows double precision for moderate ``n``; it is only ever
    handled as ``ln C`` via log-sum-exp.
    """
    _check_nab(n, a, b)
    n = int(n)
    p_a, p_b = a / n, b / n
    q_a, q_b = 1.0 - p_a, 1.0 - p_b
    t_star = 0.5 * math.log((p_a * q_b) / (q_a * p_b))
    L1 = 2 * n * math.log(math.sqrt(p_a * p_b) + math.sqrt(q_a * q_b))
    L2 = n * math.log(
        math.sqrt(q_a**3 * p_b**3 / (p_a * q_b))
        + math.sqrt(p_a**3 * q_b**3 / (q_a * p_b))
        + q_a * q_b
        + p_a * p_b
    )
    ln_C = float(np.logaddexp(L1, L2) - math.log(2.0))
    level = ln_C + math.log(2 * n + 1)
    if level - math.log(n) <= 0:
        raise ParameterError("ln C too small: entry bounds change sign inside the top block")
    i = np.arange(1, n, dtype=np.float64)
    upper = (level - np.log(i + 1)) / (level - np.log(i))
    j = np.arange(n + 1, 2 * n, dtype=np.float64)
    lower = (level - np.log(2 * n + 1 - j)) / (level - np.log(2 * n - j))
    return ChernoffConstants(n, p_a, q_a, p_b, q_b, t_star, ln_C, upper, lower)


def mgf_Y(t, n: int, a: float, b: float, exponent: str = "full"):
    """log E[exp(t Y)] for Y = Bin(m, a/n) - Bin(m, b/n).

    ``exponent="full"`` uses m = n; ``"half"`` uses m = n/2. Only the full
    convention reproduces ``ln C`` at ``t*``.
    """
    if exponent not in ("full", "half"):
        raise ParameterError("exponent must be 'full' or 'half'")
    m = n if exponent == "full" else n / 2.0
    t = np.asarray(t, dtype=np.float64)
    p_a, p_b = a / n, b / n
    out = m * (np.log1p(p_a * np.expm1(t)) + np.log1p(p_b * np.expm1(-t)))
    return out if out.ndim else float(out)


def mgf_X(t, n: int, a: float, b: float, exponent: str = "full"):
    """log MGF of the symmetrized entry: Y or -Y with probability 1/2 each."""
    t = np.asarray(t, dtype=np.float64)
    out = np.logaddexp(mgf_Y(t, n, a, b, exponent), mgf_Y(-t, n, a, b, exponent)) - math.log(2.0)
    return out if np.ndim(out) else float(out)


def quad_bound(sin_theta):
    """Return ``(bound, sharp)``: ``min(1, 4/3 sin^2)`` and ``sin^2``."""
    s = np.asarray(sin_theta, dtype=np.float64)
    if np.any((s < 0) | (s > 1)):
        raise ContractError("sin theta must lie in [0, 1]")
    sharp = s * s
    bound = np.minimum(1.0, 4.0 / 3.0 * sharp)
    if s.ndim == 0:
        return float(bound), float(sharp)
    return bound, sharp


def sharpness_vector(n: int, k: int) -> np.ndarray:
    """Extremal unit vector: ``n-k`` equal positive entries, ``2k`` zeros,
    ``n-k`` equal negative entries."""
    if not 0 <= k < n:
        raise ContractError(f"need 0 <= k < n, got k={k}, n={n}")
    x = np.zeros(2 * n)
    h = 1.0 / math.sqrt(2.0 * (n - k))
    x[: n - k] = h
    x[n + k :] = -h
    return x


def _check_sorted(x):
    scale = max(1.0, float(np.max(np.abs(x)))) if x.size else 1.0
    if np.any(np.diff(x) > SORT_TOL * scale):
        raise ContractError("cos_objective needs x sorted in descending order")


def cos_objective(x, k: int) -> float:
    """Signed four-block sum over sorted ``x``, scaled by ``1/sqrt(2n)``.

    Blocks: ``+`` on the first ``n-k``, ``-`` on the next ``k``, ``+`` on the
    following ``k``, ``-`` on the last ``n-k``.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size % 2:
        raise ContractError("x must be a 1-D array of even length")
    n = x.size // 2
    if not 0 <= k <= n:
        raise ContractError(f"need 0 <= k <= n, got {k}")
    _check_sorted(x)
    return float(cos_objective_all(x, np.array([k]), check=False)[0])


def cos_objective_all(x, ks, check: bool = True) -> np.ndarray:
    """``cos_objective`` for every ``k`` in ``ks`` from one prefix-sum pass."""
    x = np.asarray(x, dtype=np.float64)
    n = x.size // 2
    ks = np.asarray(ks, dtype=np.intp)
    if check:
        _check_sorted(x)
        if np.any((ks < 0) | (ks > n)):
            raise ContractError("k out of range")
    c = np.concatenate([[0.0], np.cumsum(x)])
    top = c[n - ks]
    mid1 = c[n] - top
    mid2 = c[n + ks] - c[n]
    bottom = c[2 * n] - c[n + ks]
    return (top - mid1 + mid2 - bottom) / math.sqrt(2 * n)


def _check_gamma(gamma):
    g = np.asarray(gamma, dtype=np.float64)
    if np.any(g >= 1) or np.any(g < 0) or np.any(np.isnan(g)):
        raise ContractError("gamma must lie in [0, 1)")
    return g


def chernoff_prediction(n: int, a: float, b: float, gamma, constants: ChernoffConstants | None = None):
    """Unnormalized closed-form cos(theta) along the Chernoff frontier.

    ``sqrt(2n)/t* (1-g) (ln C + 1 + ln((2 + 1/n)/(1-g)))``; a single scale is
    fitted downstream.
    """
    g = _check_gamma(gamma)
    cc = constants if constants is not None else chernoff_constants(n, a, b)
    u = 1.0 - g
    out = math.sqrt(2 * n) / cc.t_star * u * (cc.ln_C + 1.0 + np.log((2.0 + 1.0 / n) / u))
    return out if out.ndim else float(out)


def normal_prediction(n: int, gamma):
    """Unnormalized cos(theta) when the sorted entries are normal quantiles.

    ``2/sqrt(2n) (2n+1) (2 phi(x_{n-k}) - phi(x_n))`` with
    ``x_j = -Phi^{-1}(j/(2n+1))``.
    """
    g = _check_gamma(gamma)
    denom = 2.0 + 1.0 / n
    outer = phi(-Phi_inv((1.0 - g) / denom))
    centre = phi(-Phi_inv(1.0 / denom))
    out = 2.0 / math.sqrt(2 * n) * (2 * n + 1) * (2.0 * np.asarray(outer) - centre)
    return out if out.ndim else float(out)


def quantile_partial_sums(n: int) -> np.ndarray:
    """``s_i = sum_{j<=i} -Phi^{-1}(j/(2n+1))`` for ``i = 1..2n``."""
    j = np.arange(1, 2 * n + 1)
    return np.cumsum(-Phi_inv(j / (2 * n + 1)))
