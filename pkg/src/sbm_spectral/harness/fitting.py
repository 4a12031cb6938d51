"""One-parameter least-squares fits used to overlay the closed-form curves."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import InsufficientDataError


@dataclass(frozen=True)
class FitResult:
    model: str
    constant: float
    rss: float
    count: int
    r_squared: float


def r_squared(observed, fitted) -> float:
    observed = np.asarray(observed, dtype=np.float64)
    tss = float(np.sum((observed - observed.mean()) ** 2))
    rss = float(np.sum((observed - np.asarray(fitted)) ** 2))
    return 1.0 - rss / tss if tss > 0 else (1.0 if rss == 0 else 0.0)


def _points_array(points):
    """(sin, gamma) pairs as an array in canonical (gamma, sin) order, so
    fits do not depend on the input order down to the last bit."""
    arr = np.asarray([(float(s), float(g)) for s, g in points], dtype=np.float64).reshape(-1, 2)
    return arr[np.lexsort((arr[:, 0], arr[:, 1]))]


def scaled_sin(scale: float, raw) -> np.ndarray:
    """sin(theta) implied by cos(theta) = min(1, scale * raw)."""
    c = np.clip(scale * np.asarray(raw, dtype=np.float64), 0.0, 1.0)
    return np.sqrt(1.0 - c * c)


def fit_scale(curve, points, model: str = "scale") -> FitResult:
    """Fit ``s`` in ``sin = sqrt(1 - (s f(gamma))^2)`` by least squares in sin space.

    ``curve`` maps gamma to the raw (unnormalized) cos prediction. The search
    runs over ``(0, s_max]`` with ``s_max = 1 / max f``, so the cap at 1 never
    binds on a fitted point.
    """
    pts = _points_array(points)
    pts = pts[pts[:, 1] < 1.0]
    if pts.shape[0] < 2:
        raise InsufficientDataError("fit_scale needs at least two points with gamma < 1")
    sin_obs, gam = pts[:, 0], pts[:, 1]
    raw = np.asarray(curve(gam), dtype=np.float64)
    if not np.all(np.isfinite(raw)) or np.max(raw) <= 0:
        raise InsufficientDataError("prediction is not positive on the fitted points")
    s_max = 1.0 / float(np.max(raw))

    def rss(s):
        return float(np.sum((sin_obs - scaled_sin(s, raw)) ** 2))

    # coarse scan brackets the global minimum, Brent polishes it
    grid = s_max * np.linspace(1e-6, 1.0, 4001)
    vals = np.array([rss(s) for s in grid])
    j = int(np.argmin(vals))
    lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, grid.size - 1)]
    res = minimize_scalar(rss, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-13 * s_max, "maxiter": 500})
    s = float(res.x) if res.fun <= vals[j] else float(grid[j])
    fitted = scaled_sin(s, raw)
    return FitResult(model, s, rss(s), int(pts.shape[0]), r_squared(sin_obs, fitted))


def log_quarter_regressor(gamma):
    g = np.asarray(gamma, dtype=np.float64)
    return np.log(2.0 / g) ** -0.25


def fit_log_quarter(points) -> FitResult:
    """Through-origin OLS of sin(theta) on ``(ln(2/gamma))^(-1/4)``.

    Points with gamma outside (0, 2) have no finite regressor and are dropped.
    """
    pts = _points_array(points)
    pts = pts[(pts[:, 1] > 0) & (pts[:, 1] < 2)]
    if pts.shape[0] < 2:
        raise InsufficientDataError("fit_log_quarter needs at least two points with 0 < gamma < 2")
    sin_obs = pts[:, 0]
    z = log_quarter_regressor(pts[:, 1])
    C = float(z @ sin_obs / (z @ z))
    fitted = C * z
    rss = float(np.sum((sin_obs - fitted) ** 2))
    if not math.isfinite(C):
        raise InsufficientDataError("fit produced a non-finite constant")
    return FitResult("logquarter", C, rss, int(pts.shape[0]), r_squared(sin_obs, fitted))
