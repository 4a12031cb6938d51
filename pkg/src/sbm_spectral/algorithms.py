"""Spectral Partition (simplified and degree-trimmed), Correction, and the
red/blue two-stage Partition pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError
from .linalg import Subspace, project_onto, top_k_eigenpairs, unit_perp_in_plane
from .model import PlantedGraph, color_edges

TRIM_FACTOR = 20.0
GAP_FLAG = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralDiagnostics:
    lambda1: float
    lambda2: float
    v1: np.ndarray
    v2: np.ndarray
    trimmed_vertices: np.ndarray
    basis: np.ndarray
    lambda3: float | None = None
    near_degenerate: bool = False

    @property
    def eigenspace(self) -> Subspace:
        return Subspace(self.basis)


@dataclass(frozen=True, eq=False)
class PartitionResult:
    side1: np.ndarray
    side2: np.ndarray
    diagnostics: SpectralDiagnostics


@dataclass(frozen=True, eq=False)
class CorrectedPartition:
    side1: np.ndarray
    side2: np.ndarray
    bad1: np.ndarray
    bad2: np.ndarray
    initial: PartitionResult | None = field(default=None)


def _as_matrix(A) -> np.ndarray:
    if isinstance(A, PlantedGraph):
        A = A.adjacency
    M = np.asarray(A, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise ContractError("expected a 2n x 2n matrix")
    return M


def _spectral_partition(M: np.ndarray, trimmed: np.ndarray) -> PartitionResult:
    size = M.shape[0]
    n = size // 2
    k = 3 if size >= 3 else 2
    pairs = top_k_eigenpairs(M, k)
    W = Subspace(np.column_stack([pairs[0].vector, pairs[1].vector]))
    v1 = project_onto(np.ones(size), W)
    v2 = unit_perp_in_plane(v1, W)
    # descending v2, ties broken by ascending vertex index
    order = np.lexsort((np.arange(size), -v2))
    lam3 = pairs[2].value if k == 3 else None
    diag = SpectralDiagnostics(
        lambda1=pairs[0].value,
        lambda2=pairs[1].value,
        v1=v1,
        v2=v2,
        trimmed_vertices=trimmed,
        basis=W.basis,
        lambda3=lam3,
        near_degenerate=lam3 is not None and abs(pairs[1].value - lam3) < GAP_FLAG,
    )
    return PartitionResult(np.sort(order[:n]), np.sort(order[n:]), diag)


def spectral_partition_simplified(A, d: float | None = None) -> PartitionResult:
    """Top-2 eigenspace of ``A`` itself, no degree trimming.

    ``d`` is accepted for interface parity with the trimmed variant and ignored.
    """
    return _spectral_partition(_as_matrix(A), np.empty(0, dtype=np.intp))


def spectral_partition_original(A, d: float) -> PartitionResult:
    """Zero the rows/columns of vertices with degree above ``20 d`` first.

    Trimmed vertices stay in the ranking with whatever ``v2`` assigns them.
    """
    if not d > 0:
        raise ContractError("d must be positive")
    M = _as_matrix(A)
    deg = M.sum(axis=1)
    trimmed = np.flatnonzero(deg > TRIM_FACTOR * d)
    if trimmed.size:
        M = M.copy()
        M[trimmed, :] = 0.0
        M[:, trimmed] = 0.0
    return _spectral_partition(M, trimmed)


def correction(p, blue, d: float) -> CorrectedPartition:
    """Swap every vertex with at least ``d/4`` blue neighbours on the other side."""
    B = _as_matrix(blue)
    side1 = np.asarray(p.side1, dtype=np.intp)
    side2 = np.asarray(p.side2, dtype=np.intp)
    if side1.size + side2.size != B.shape[0] or np.intersect1d(side1, side2).size:
        raise ContractError("partition does not cover the blue graph's vertex set")
    threshold = d / 4.0
    cross1 = B[np.ix_(side1, side2)].sum(axis=1)
    cross2 = B[np.ix_(side2, side1)].sum(axis=1)
    bad1 = side1[cross1 >= threshold]
    bad2 = side2[cross2 >= threshold]
    new1 = np.sort(np.concatenate([np.setdiff1d(side1, bad1), bad2]))
    new2 = np.sort(np.concatenate([np.setdiff1d(side2, bad2), bad1]))
    initial = p if isinstance(p, PartitionResult) else None
    return CorrectedPartition(new1, new2, bad1, bad2, initial)


def full_partition(graph: PlantedGraph, seed: int) -> CorrectedPartition:
    """Red/blue split, trimmed Spectral Partition on red, Correction on blue.

    The red graph has half the edge density, so it is trimmed against
    ``(a+b)/2``; Correction uses ``d = a+b``.
    """
    colors = color_edges(graph, seed)
    d = graph.params.d
    first = spectral_partition_original(colors.red, d / 2.0)
    return correction(first, colors.blue, d)
