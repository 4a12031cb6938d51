"""Accuracy and alignment measures for a computed partition."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .linalg import Subspace, sin_angle_subspaces, sin_angle_vectors, spectral_norm, top_k_eigenpairs
from .model import PlantedGraph, expected_adjacency, planted_eigenvectors


@dataclass(frozen=True)
class AccuracyReport:
    gamma: float
    matching: str  # "direct" (side1 ~ community 1) or "swapped"
    sin_theta_vec: float
    sin_theta_subspace: float


def _check_partition(side1, side2, size):
    s1 = np.asarray(side1, dtype=np.intp)
    s2 = np.asarray(side2, dtype=np.intp)
    seen = np.zeros(size, dtype=np.int64)
    if s1.size and (s1.min() < 0 or s1.max() >= size) or s2.size and (s2.min() < 0 or s2.max() >= size):
        raise ContractError("vertex index out of range")
    np.add.at(seen, s1, 1)
    np.add.at(seen, s2, 1)
    if not np.all(seen == 1):
        raise ContractError("sides do not partition the vertex set")
    return s1, s2


def gamma_with_matching(side1, side2, labels) -> tuple[float, str]:
    labels = np.asarray(labels)
    size = labels.size
    n = size // 2
    s1, s2 = _check_partition(side1, side2, size)
    in1 = labels == 1
    direct = max(1 - np.count_nonzero(in1[s1]) / n, 1 - np.count_nonzero(~in1[s2]) / n)
    swapped = max(1 - np.count_nonzero(~in1[s1]) / n, 1 - np.count_nonzero(in1[s2]) / n)
    if swapped < direct:
        return float(min(1.0, max(0.0, swapped))), "swapped"
    return float(min(1.0, max(0.0, direct))), "direct"


def gamma_of(p, labels) -> float:
    """Smallest gamma for which the optimally labelled partition is gamma-correct."""
    return gamma_with_matching(p.side1, p.side2, labels)[0]


def planted_subspace(n: int) -> Subspace:
    return Subspace(np.column_stack(planted_eigenvectors(n)))


def accuracy_report(p, graph: PlantedGraph) -> AccuracyReport:
    """gamma plus sin of the angles (u2, v2) and (W, W_E) from ``p.diagnostics``."""
    gamma, matching = gamma_with_matching(p.side1, p.side2, graph.labels)
    diag = p.diagnostics
    _, u2 = planted_eigenvectors(graph.n)
    return AccuracyReport(
        gamma=gamma,
        matching=matching,
        sin_theta_vec=sin_angle_vectors(u2, diag.v2),
        sin_theta_subspace=sin_angle_subspaces(diag.eigenspace, planted_subspace(graph.n)),
    )


def surrogate_error_from(A, u2, w2=None) -> float:
    """``||w2 - A u2 / ||A u2|| ||_inf`` with ``w2`` sign-aligned to the surrogate."""
    A = np.asarray(A, dtype=np.float64)
    s = A @ np.asarray(u2, dtype=np.float64)
    norm = np.linalg.norm(s)
    if norm == 0:
        raise ContractError("A u2 vanishes; surrogate undefined")
    s /= norm
    if w2 is None:
        w2 = top_k_eigenpairs(A, 2)[1].vector
    w2 = np.asarray(w2, dtype=np.float64)
    w2 = w2 / np.linalg.norm(w2)
    if w2 @ s < 0:
        w2 = -w2
    return float(np.max(np.abs(w2 - s)))


def surrogate_error(graph: PlantedGraph, w2=None) -> float:
    """Entrywise gap between the second eigenvector of A and the A u2 surrogate.

    Both vectors are unit-normalized first, so the ``1/(a-b)`` factor drops out.
    """
    _, u2 = planted_eigenvectors(graph.n)
    return surrogate_error_from(graph.as_float(), u2, w2)


def noise_norm(graph: PlantedGraph, tol: float = 1e-8) -> float:
    """Spectral norm of ``A - E[A]``."""
    return spectral_norm(graph.as_float() - expected_adjacency(graph.params), tol)
