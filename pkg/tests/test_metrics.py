import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbm_spectral.algorithms import spectral_partition_simplified
from sbm_spectral.errors import ContractError
from sbm_spectral.linalg import spectral_norm
from sbm_spectral.metrics import (
    accuracy_report,
    gamma_of,
    gamma_with_matching,
    noise_norm,
    surrogate_error,
    surrogate_error_from,
)
from sbm_spectral.model import SbmParams, expected_adjacency, planted_eigenvectors, sample_graph


class _P:
    def __init__(self, s1, s2):
        self.side1, self.side2 = np.asarray(s1), np.asarray(s2)


LABELS10 = np.repeat([1, 2], 10)


def test_gamma_examples():
    truth = _P(np.arange(10), np.arange(10, 20))
    assert gamma_of(truth, LABELS10) == 0.0
    assert gamma_with_matching(truth.side2, truth.side1, LABELS10) == (0.0, "swapped")
    s1 = np.r_[np.arange(1, 10), 10]
    s2 = np.r_[0, np.arange(11, 20)]
    assert gamma_of(_P(s1, s2), LABELS10) == pytest.approx(0.1)


def test_gamma_rejects_bad_partition():
    with pytest.raises(ContractError):
        gamma_of(_P(np.arange(9), np.arange(10, 20)), LABELS10)
    with pytest.raises(ContractError):
        gamma_of(_P(np.arange(10), np.arange(9, 19)), LABELS10)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 40), seed=st.integers(0, 2**31))
def test_gamma_invariants(n, seed):
    rng = np.random.default_rng(seed)
    perm = rng.permutation(2 * n)
    s1, s2 = np.sort(perm[:n]), np.sort(perm[n:])
    labels = np.repeat([1, 2], n)
    g = gamma_of(_P(s1, s2), labels)
    assert 0.0 <= g <= 0.5
    assert g == gamma_of(_P(s2, s1), labels)
    relabeled = np.where(labels == 1, 2, 1)
    assert g == gamma_of(_P(s1, s2), relabeled)
    planted = set(range(n))
    assert (g == 0.0) == (set(s1) == planted or set(s2) == planted)
    # equal-sized sides: the two per-community deficits coincide
    in1 = labels == 1
    d1 = 1 - np.count_nonzero(in1[s1]) / n
    d2 = 1 - np.count_nonzero(~in1[s2]) / n
    assert d1 == pytest.approx(d2, abs=1e-12)


def test_accuracy_report_ranges(graph500):
    rep = accuracy_report(spectral_partition_simplified(graph500.adjacency), graph500)
    assert 0 <= rep.gamma <= 1 and rep.matching in ("direct", "swapped")
    assert 0 <= rep.sin_theta_vec <= 1 and 0 <= rep.sin_theta_subspace <= 1
    assert rep.sin_theta_vec <= rep.sin_theta_subspace + 1e-12


def test_surrogate_exact_on_block_constant():
    n = 20
    A = np.full((2 * n, 2 * n), 0.5)
    A[:n, :n] = 1.0
    A[n:, n:] = 1.0
    np.fill_diagonal(A, 0.0)
    _, u2 = planted_eigenvectors(n)
    assert surrogate_error_from(A, u2) <= 1e-8


def test_surrogate_sign_invariance(graph500):
    _, u2 = planted_eigenvectors(500)
    A = graph500.as_float()
    base = surrogate_error_from(A, u2)
    assert surrogate_error_from(A, -u2) == pytest.approx(base, abs=1e-15)
    w2 = spectral_partition_simplified(A).diagnostics.v2
    assert surrogate_error_from(A, u2, -w2) == pytest.approx(surrogate_error_from(A, u2, w2), abs=1e-15)
    assert surrogate_error(graph500) == pytest.approx(base, abs=1e-15)


def test_noise_norm_on_realized_expectation():
    # weighted graph equal to its expectation off the diagonal: M = -(1/2) I
    n = 10
    E = np.full((2 * n, 2 * n), 0.5)
    A = E - np.diag(np.diag(E))
    assert spectral_norm(A - E) == pytest.approx(0.5)


def test_noise_matrix_is_indefinite():
    g = sample_graph(SbmParams(100, 6, 4), 3)
    vals = np.linalg.eigvalsh(g.as_float() - expected_adjacency(g.params))
    assert vals[0] < 0 < vals[-1]


def test_noise_norm_matches_dense(graph500):
    M = graph500.as_float() - expected_adjacency(graph500.params)
    assert noise_norm(graph500) == pytest.approx(np.max(np.abs(np.linalg.eigvalsh(M))), rel=1e-8)


def test_noise_ratio_stable_across_sizes():
    ratios = []
    for n, seeds in ((500, range(10)), (1000, range(4))):
        p = SbmParams.from_fractions(n, 0.06, 0.04)
        for s in seeds:
            ratios.append(noise_norm(sample_graph(p, s)) / math.sqrt(p.d))
    assert np.all(np.isfinite(ratios))
    assert max(ratios) / min(ratios) <= 2.0
