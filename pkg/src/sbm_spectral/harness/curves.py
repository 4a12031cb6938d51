"""Per-n theoretical and frontier curves as CSV rows."""
from __future__ import annotations

import math

import numpy as np

from ..frontier import chernoff_frontier, default_k_grid, mc_frontier
from ..theory import chernoff_constants, chernoff_prediction, normal_prediction, quad_bound
from .fitting import FitResult, fit_scale, scaled_sin
from .io import Row

KINDS = ("quad", "chernoff-opt", "chernoff-pred", "mc", "normal-pred")
FIT_WINDOW = (0.02, 0.3)
MC_REPS_SINGLE = 50


def _in_window(gamma, window):
    lo, hi = window
    return lo <= gamma <= hi


def quad_rows(n, a, b, ks=None) -> list[Row]:
    """Sharp quadratic curve ``gamma = sin^2``, sampled at ``gamma = k/n``."""
    ks = default_k_grid(n) if ks is None else ks
    rows = []
    for k in ks:
        g = k / n
        s = math.sqrt(g)
        rows.append(Row("quad", n, a, b, int(k), g, s, math.sqrt(1 - g), quad_bound(s)[0]))
    return rows


def chernoff_opt_rows(n, a, b, ks=None) -> list[Row]:
    return [Row.from_point(p) for p in chernoff_frontier(n, a, b, ks)]


def mc_rows(n, a, b, reps, seed, ks=None) -> list[Row]:
    return [Row.from_point(p) for p in mc_frontier(n, a, b, reps, seed, ks)]


def mc_median_points(rows) -> list[tuple[float, float]]:
    """(median sin, gamma) per k from MC rows sharing one n."""
    by_k: dict[int, list[float]] = {}
    for r in rows:
        by_k.setdefault(r.k_or_seed, []).append(r.sin_theta)
    n = rows[0].n
    return [(float(np.median(v)), k / n) for k, v in sorted(by_k.items())]


def _prediction_rows(kind, n, a, b, ks, raw_fn, points, window) -> tuple[list[Row], FitResult]:
    fit_pts = [(s, g) for s, g in points if _in_window(g, window)]
    fit = fit_scale(raw_fn, fit_pts, model=f"scale:{kind}")
    ks = default_k_grid(n) if ks is None else ks
    gam = np.asarray(ks, dtype=np.float64) / n
    raw = np.asarray(raw_fn(gam), dtype=np.float64)
    sins = scaled_sin(fit.constant, raw)
    rows = [Row(kind, n, a, b, int(k), float(g), float(s), float(f), fit.constant)
            for k, g, s, f in zip(ks, gam, sins, raw)]
    return rows, fit


def chernoff_pred_rows(n, a, b, opt_rows, ks=None, window=FIT_WINDOW):
    """Closed-form Chernoff curve with its scale fitted to the solver rows."""
    cc = chernoff_constants(n, a, b)
    pts = [(r.sin_theta, r.gamma) for r in opt_rows]
    return _prediction_rows("chernoff-pred", n, a, b, ks,
                            lambda g: chernoff_prediction(n, a, b, g, cc), pts, window)


def normal_pred_rows(n, a, b, mc, ks=None, window=FIT_WINDOW):
    """Normal-quantile curve with its scale fitted to the MC median."""
    return _prediction_rows("normal-pred", n, a, b, ks,
                            lambda g: normal_prediction(n, g), mc_median_points(mc), window)


def curve_rows(kind, n, a, b, reps=None, seed=0, ks=None, window=FIT_WINDOW):
    """Rows for one curve kind at one n; prediction kinds compute their own reference."""
    if kind == "quad":
        return quad_rows(n, a, b, ks)
    if kind == "chernoff-opt":
        return chernoff_opt_rows(n, a, b, ks)
    if kind == "mc":
        return mc_rows(n, a, b, reps or MC_REPS_SINGLE, seed, ks)
    if kind == "chernoff-pred":
        return chernoff_pred_rows(n, a, b, chernoff_opt_rows(n, a, b, ks), ks, window)[0]
    if kind == "normal-pred":
        return normal_pred_rows(n, a, b, mc_rows(n, a, b, reps or MC_REPS_SINGLE, seed, ks), ks, window)[0]
    raise ValueError(f"unknown curve kind {kind!r}")
