import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbm_spectral.errors import ContractError, ParameterError
from sbm_spectral.model import planted_eigenvectors
from sbm_spectral.theory import (
    Phi,
    Phi_inv,
    chernoff_constants,
    chernoff_prediction,
    cos_objective,
    cos_objective_all,
    mgf_X,
    mgf_Y,
    normal_prediction,
    phi,
    quad_bound,
    quantile_partial_sums,
    sharpness_vector,
)

mp.mp.dps = 50


def _mp_constants(n, a, b):
    pa, pb = mp.mpf(a) / n, mp.mpf(b) / n
    qa, qb = 1 - pa, 1 - pb
    t = mp.log(pa * qb / (qa * pb)) / 2
    C = ((mp.sqrt(pa * pb) + mp.sqrt(qa * qb)) ** (2 * n)
         + (mp.sqrt(qa**3 * pb**3 / (pa * qb)) + mp.sqrt(pa**3 * qb**3 / (qa * pb)) + qa * qb + pa * pb) ** n) / 2
    return t, mp.log(C)


def test_t_star_and_ln_C_against_extended_precision():
    cc = chernoff_constants(500, 30, 20)
    t, lnC = _mp_constants(500, 30, 20)
    assert cc.t_star == pytest.approx(float(t), rel=1e-14)
    assert cc.t_star == pytest.approx(0.5 * math.log(0.0576 / 0.0376), rel=1e-14)
    assert cc.t_star == pytest.approx(0.21326, abs=5e-6)
    assert cc.ln_C == pytest.approx(float(lnC), rel=1e-12)


@pytest.mark.parametrize("n,a,b", [(100, 6, 4), (1000, 60, 40), (750, 45, 30)])
def test_ln_C_other_sizes(n, a, b):
    assert chernoff_constants(n, a, b).ln_C == pytest.approx(float(_mp_constants(n, a, b)[1]), rel=1e-12)


def test_constants_reject_equal_affinities():
    with pytest.raises(ParameterError):
        chernoff_constants(500, 20, 20)


def test_ratio_families_strictly_inside_unit_interval():
    cc = chernoff_constants(500, 30, 20)
    assert cc.upper_ratios.shape == (499,) and cc.lower_ratios.shape == (499,)
    for r in (cc.upper_ratios, cc.lower_ratios):
        assert np.all((r > 0) & (r < 1))
    L = cc.ln_C + math.log(1001)
    i = np.arange(1, 500)
    assert np.allclose(cc.upper_ratios, (L - np.log(i + 1)) / (L - np.log(i)), rtol=1e-15)


def test_upper_ratio_products_telescope():
    cc = chernoff_constants(500, 30, 20)
    L = cc.level
    prods = np.cumprod(cc.upper_ratios)
    i = np.arange(2, 501)
    assert np.allclose(prods, (L - np.log(i)) / L, rtol=1e-12)
    lower = np.cumprod(cc.lower_ratios[::-1])[::-1]
    j = np.arange(501, 1000)
    # s_j ... s_{2n-1} telescopes to (L - ln(2n+1-j)) / L
    assert np.allclose(lower, (L - np.log(2 * 500 + 1 - j)) / L, rtol=1e-12)


def test_ln_C_matches_full_exponent_mgf_at_t_star():
    """Records which exponent convention the concentration constant follows."""
    cc = chernoff_constants(500, 30, 20)
    full = mgf_X(cc.t_star, 500, 30, 20, "full")
    half = mgf_X(cc.t_star, 500, 30, 20, "half")
    assert full == pytest.approx(cc.ln_C, rel=1e-12)
    assert abs(half - cc.ln_C) > 1.0


def test_mgf_examples():
    assert mgf_Y(0.0, 500, 30, 20) == 0.0
    assert mgf_X(0.0, 500, 30, 20, "half") == 0.0
    h = 1e-6
    for conv, m in (("full", 500), ("half", 250)):
        deriv = (mgf_Y(h, 500, 30, 20, conv) - mgf_Y(-h, 500, 30, 20, conv)) / (2 * h)
        assert deriv == pytest.approx(m * (30 - 20) / 500, rel=1e-6)
    with pytest.raises(ParameterError):
        mgf_Y(0.1, 500, 30, 20, "other")


def test_mgf_against_mpmath():
    t = 0.37
    pa, pb = mp.mpf(30) / 500, mp.mpf(20) / 500
    exact = 500 * (mp.log(1 + pa * (mp.e**t - 1)) + mp.log(1 + pb * (mp.e**-t - 1)))
    assert mgf_Y(t, 500, 30, 20) == pytest.approx(float(exact), rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(t=st.floats(-3, 3))
def test_mgf_X_symmetric(t):
    assert mgf_X(t, 500, 30, 20) == pytest.approx(mgf_X(-t, 500, 30, 20), rel=1e-12, abs=1e-12)


def test_quad_bound_examples():
    assert quad_bound(0.0) == (0.0, 0.0)
    assert quad_bound(0.6)[1] == pytest.approx(0.36)
    assert quad_bound(0.6)[0] == pytest.approx(0.48)
    assert quad_bound(1.0) == (1.0, 1.0)
    with pytest.raises(ContractError):
        quad_bound(1.5)


def test_sharpness_vector_k0_is_u2():
    _, u2 = planted_eigenvectors(50)
    assert np.allclose(sharpness_vector(50, 0), u2, atol=1e-15)


@pytest.mark.parametrize("n", [1, 7, 50, 333])
def test_sharpness_identity_and_norm(n):
    for k in range(n):
        x = sharpness_vector(n, k)
        assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)
        assert cos_objective(x, k) == pytest.approx(math.sqrt(1 - k / n), abs=1e-12)


def test_cos_objective_examples():
    _, u2 = planted_eigenvectors(20)
    assert cos_objective(u2, 0) == pytest.approx(1.0, abs=1e-14)
    x = np.sort(np.random.default_rng(1).standard_normal(40))[::-1]
    # negating and re-sorting swaps the two halves, leaving k = 0 unchanged
    assert cos_objective(-x[::-1], 0) == pytest.approx(cos_objective(x, 0), abs=1e-14)
    with pytest.raises(ContractError):
        cos_objective(x[::-1], 0)
    with pytest.raises(ContractError):
        cos_objective(x, 21)


def test_cos_objective_sign_reversal_k0():
    x = np.array([3.0, 1.0, -0.5, -2.0])
    y = -x  # not sorted descending, so compare the raw block sums
    assert cos_objective_all(y, [0], check=False)[0] == pytest.approx(-cos_objective(x, 0))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**31), n=st.integers(1, 30))
def test_cos_objective_all_matches_scalar(seed, n):
    x = np.sort(np.random.default_rng(seed).standard_normal(2 * n))[::-1]
    ks = np.arange(n + 1)
    direct = []
    for k in ks:
        s = np.r_[np.ones(n - k), -np.ones(k), np.ones(k), -np.ones(n - k)]
        direct.append(s @ x / math.sqrt(2 * n))
    assert np.allclose(cos_objective_all(x, ks), direct, atol=1e-12)


def test_chernoff_prediction_at_zero():
    cc = chernoff_constants(500, 30, 20)
    t, lnC = _mp_constants(500, 30, 20)
    expected = mp.sqrt(1000) / t * (lnC + 1 + mp.log(mp.mpf("2.002")))
    assert chernoff_prediction(500, 30, 20, 0.0) == pytest.approx(float(expected), rel=1e-12)
    assert chernoff_prediction(500, 30, 20, 0.0, cc) == chernoff_prediction(500, 30, 20, 0.0)


def test_chernoff_prediction_vanishes_near_one():
    vals = [chernoff_prediction(500, 30, 20, 1 - 10.0**-e) for e in (2, 4, 8, 12)]
    assert all(v > 0 for v in vals) and vals == sorted(vals, reverse=True)
    assert vals[-1] < 1e-8


def test_chernoff_prediction_decreasing_on_grid():
    g = np.linspace(0, 0.9, 2001)
    v = chernoff_prediction(500, 30, 20, g)
    assert np.all(np.diff(v) < 0)


def test_predictions_reject_gamma_outside_range():
    for fn in (lambda g: chernoff_prediction(500, 30, 20, g), lambda g: normal_prediction(500, g)):
        with pytest.raises(ContractError):
            fn(1.0)
        with pytest.raises(ContractError):
            fn(-0.1)


def _mp_phi(x):
    return mp.exp(-x * x / 2) / mp.sqrt(2 * mp.pi)


def _mp_quantile(p):
    """Bisection on the erf-series CDF."""
    lo, hi = mp.mpf(-40), mp.mpf(40)
    for _ in range(200):
        mid = (lo + hi) / 2
        if mp.ncdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def test_normal_prediction_at_zero():
    n = 500
    x = -Phi_inv(1 / (2 + 1 / n))
    expected = 2 / math.sqrt(2 * n) * (2 * n + 1) * phi(x)
    assert normal_prediction(n, 0.0) == pytest.approx(expected, rel=1e-14)


def test_normal_prediction_against_extended_precision():
    n = 500
    q_out = _mp_quantile(mp.mpf("0.9") / mp.mpf("2.002"))
    q_mid = _mp_quantile(1 / mp.mpf("2.002"))
    expected = 2 / mp.sqrt(1000) * 1001 * (2 * _mp_phi(q_out) - _mp_phi(q_mid))
    assert normal_prediction(n, 0.1) == pytest.approx(float(expected), rel=1e-12)


def test_normal_prediction_strictly_decreasing():
    g = np.linspace(1e-4, 1 - 1e-4, 5001)
    for n in (500, 1000):
        assert np.all(np.diff(normal_prediction(n, g)) < 0)


SWEEP_PARAMS = [(500, 30, 20), (750, 45, 30), (1000, 60, 40)]


@pytest.mark.parametrize("n,a,b", SWEEP_PARAMS)
def test_chernoff_prediction_finite_positive_decreasing(n, a, b):
    v = chernoff_prediction(n, a, b, np.linspace(0, 0.99, 1000))
    assert np.all(np.isfinite(v)) and np.all(v > 0) and np.all(np.diff(v) < 0)


@pytest.mark.parametrize("n", [p[0] for p in SWEEP_PARAMS])
def test_normal_prediction_finite_positive_decreasing(n):
    v = normal_prediction(n, np.linspace(0, 0.99, 1000))
    assert np.all(np.isfinite(v)) and np.all(np.diff(v) < 0)
    assert np.all(v > 0)


def test_phi_constants():
    assert Phi_inv(0.5) == 0.0
    assert phi(0.0) == pytest.approx(float(1 / mp.sqrt(2 * mp.pi)), rel=1e-15)
    assert phi(0.0) == pytest.approx(0.3989423, abs=1e-7)
    for bad in (0.0, 1.0, -0.2, float("nan")):
        with pytest.raises(ParameterError):
            Phi_inv(bad)


def test_Phi_inv_against_mpmath(rng):
    for p in rng.random(20) * 0.998 + 0.001:
        assert Phi_inv(p) == pytest.approx(float(_mp_quantile(mp.mpf(p))), rel=1e-12, abs=1e-14)


def test_Phi_roundtrip(rng):
    p = rng.random(1000) * (1 - 2e-12) + 1e-12
    assert np.allclose(Phi(Phi_inv(p)), p, atol=1e-9, rtol=0)


@settings(max_examples=100, deadline=None)
@given(x=st.floats(-30, 30))
def test_Phi_symmetry(x):
    assert Phi(-x) == pytest.approx(1 - Phi(x), abs=1e-15)


def test_quantile_partial_sum_approximation():
    """Checked where the approximation is used: s_{n-k} with 0 <= k <= n/2."""
    n = 500
    s = quantile_partial_sums(n)
    i = np.arange(1, 2 * n + 1)
    x = -Phi_inv(i / (2 * n + 1))
    approx = (2 * n + 1) * phi(x)
    mask = (i >= n / 2) & (i <= n)
    gap = np.abs(s[mask] - approx[mask]) / np.abs(approx[mask])
    assert np.max(gap) <= 0.02
