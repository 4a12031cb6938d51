import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbm_spectral import algorithms
from sbm_spectral.algorithms import (
    correction,
    full_partition,
    spectral_partition_original,
    spectral_partition_simplified,
)
from sbm_spectral.errors import ContractError
from sbm_spectral.linalg import EigenPair, sin_angle_vectors
from sbm_spectral.metrics import gamma_of
from sbm_spectral.model import SbmParams, graph_from_adjacency, planted_eigenvectors, sample_graph

from .helpers import two_blocks


def test_simplified_on_expected_adjacency(expected500):
    res = spectral_partition_simplified(expected500, 50.0)
    labels = np.repeat([1, 2], 500)
    assert gamma_of(res, labels) == 0.0
    _, u2 = planted_eigenvectors(500)
    assert sin_angle_vectors(u2, res.diagnostics.v2) <= 1e-8
    assert res.diagnostics.lambda1 == pytest.approx(50.0)
    assert res.diagnostics.lambda2 == pytest.approx(10.0)


def test_simplified_on_two_blocks():
    res = spectral_partition_simplified(two_blocks(25).astype(float))
    assert gamma_of(res, np.repeat([1, 2], 25)) == 0.0


def test_simplified_quadratic_bound_seed1(graph500):
    res = spectral_partition_simplified(graph500.adjacency)
    _, u2 = planted_eigenvectors(500)
    s = sin_angle_vectors(u2, res.diagnostics.v2)
    assert gamma_of(res, graph500.labels) <= 4 / 3 * s * s


def test_sides_have_n_vertices(graph500):
    res = spectral_partition_simplified(graph500.adjacency)
    assert res.side1.size == res.side2.size == 500
    assert np.array_equal(np.sort(np.concatenate([res.side1, res.side2])), np.arange(1000))


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 25), seed=st.integers(0, 2**31))
def test_sides_have_n_vertices_property(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.random((2 * n, 2 * n)) < 0.3
    adj = np.triu(X, 1)
    adj = adj | adj.T
    if not adj.any():
        return
    for res in (spectral_partition_simplified(adj), spectral_partition_original(adj, 0.1)):
        assert res.side1.size == res.side2.size == n
        assert np.intersect1d(res.side1, res.side2).size == 0


def test_deterministic(graph500):
    r1 = spectral_partition_simplified(graph500.adjacency)
    r2 = spectral_partition_simplified(graph500.adjacency.copy())
    assert np.array_equal(r1.side1, r2.side1)


def test_tie_break_by_index(monkeypatch):
    w = np.array([1.0, 0.0, 0.0, -1.0]) / math.sqrt(2)
    ones = np.full(4, 0.5)

    def fake(M, k):
        return [EigenPair(3.0, ones), EigenPair(2.0, w), EigenPair(0.0, np.array([0, 1.0, -1.0, 0]) / math.sqrt(2))][:k]

    monkeypatch.setattr(algorithms, "top_k_eigenpairs", fake)
    res = spectral_partition_simplified(np.zeros((4, 4)))
    assert res.diagnostics.v2[1] == res.diagnostics.v2[2] == 0.0
    assert list(res.side1) == [0, 1] and list(res.side2) == [2, 3]


def test_original_matches_simplified_without_trimming(graph500):
    a = spectral_partition_simplified(graph500.adjacency)
    b = spectral_partition_original(graph500.adjacency, 50.0)
    assert b.diagnostics.trimmed_vertices.size == 0
    assert graph500.adjacency.sum(axis=1).max() <= 1000
    assert np.array_equal(a.side1, b.side1)


def test_original_trims_high_degree_vertex(monkeypatch):
    adj = np.zeros((8, 8), dtype=bool)
    adj[0, 1:] = True
    for u, v in [(1, 2), (2, 3), (5, 6), (6, 7), (4, 5)]:
        adj[u, v] = True
    adj = adj | adj.T
    seen = {}
    real = algorithms.top_k_eigenpairs

    def spy(M, k):
        seen["M"] = M.copy()
        return real(M, k)

    monkeypatch.setattr(algorithms, "top_k_eigenpairs", spy)
    res = spectral_partition_original(adj, 0.3)
    assert list(res.diagnostics.trimmed_vertices) == [0]
    assert not seen["M"][0].any() and not seen["M"][:, 0].any()
    assert seen["M"][1, 2] == 1.0


def test_original_rejects_bad_d(graph500):
    with pytest.raises(ContractError):
        spectral_partition_original(graph500.adjacency, 0.0)


def test_near_degenerate_flag():
    res = spectral_partition_simplified(two_blocks(10).astype(float))
    assert res.diagnostics.lambda3 == pytest.approx(-1.0)
    assert not res.diagnostics.near_degenerate


def _split(n):
    return spectral_partition_simplified(two_blocks(n).astype(float))


def test_correction_blue_edgeless():
    p = _split(10)
    out = correction(p, np.zeros((20, 20)), d=8.0)
    assert out.bad1.size == out.bad2.size == 0
    assert np.array_equal(out.side1, p.side1) and np.array_equal(out.side2, p.side2)


def test_correction_boundary_is_bad():
    p = _split(4)
    u = int(p.side1[0])
    v = int(p.side2[0])
    blue = np.zeros((8, 8))
    blue[u, v] = blue[v, u] = 1.0
    out = correction(p, blue, d=4.0)  # threshold d/4 = 1, exactly met
    assert u in out.bad1 and v in out.bad2
    assert u in out.side2 and v in out.side1
    out = correction(p, blue, d=4.0 + 1e-9)
    assert out.bad1.size == 0


def test_correction_idempotent_without_bad_vertices(graph500):
    p = spectral_partition_simplified(graph500.adjacency)
    blue = np.zeros((1000, 1000))
    once = correction(p, blue, 50.0)
    twice = correction(once, blue, 50.0)
    assert np.array_equal(once.side1, twice.side1) and np.array_equal(once.side2, twice.side2)


def test_correction_rejects_mismatched_partition():
    p = _split(4)
    with pytest.raises(ContractError):
        correction(p, np.zeros((10, 10)), 1.0)


def test_full_partition_two_blocks():
    g = graph_from_adjacency(SbmParams(30, 29, 1), two_blocks(30))
    res = full_partition(g, 4)
    assert gamma_of(res, g.labels) == 0.0
    assert res.bad1.size == res.bad2.size == 0


def test_full_partition_deterministic(graph500):
    r1 = full_partition(graph500, 11)
    r2 = full_partition(graph500, 11)
    assert np.array_equal(r1.side1, r2.side1) and np.array_equal(r1.bad1, r2.bad1)


def test_correction_guard_n500():
    """Correction should not raise gamma by more than 0.02 over its input."""
    p = SbmParams(500, 30, 20)
    deltas = []
    for seed in range(10):
        g = sample_graph(p, seed)
        res = full_partition(g, 1000 + seed)
        deltas.append(gamma_of(res, g.labels) - gamma_of(res.initial, g.labels))
    print("corrected - initial gamma per seed:", np.round(deltas, 3))
    assert max(deltas) <= 0.02


def test_corrected_vs_simplified_n1000():
    p = SbmParams(1000, 60, 40)
    full, simple = [], []
    for seed in range(10):
        g = sample_graph(p, seed)
        full.append(gamma_of(full_partition(g, 1000 + seed), g.labels))
        simple.append(gamma_of(spectral_partition_simplified(g.adjacency), g.labels))
    print(f"mean gamma corrected {np.mean(full):.4f}, simplified {np.mean(simple):.4f}")
    assert np.mean(full) <= np.mean(simple) + 0.02
