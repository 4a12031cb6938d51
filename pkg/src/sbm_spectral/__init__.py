"""Spectral partitioning of the two-block stochastic block model, with the
(sin theta, gamma) frontier machinery used to analyse it."""
from ._kernels import BACKEND
from .algorithms import (
    CorrectedPartition,
    PartitionResult,
    correction,
    full_partition,
    spectral_partition_original,
    spectral_partition_simplified,
)
from .errors import (
    ContractError,
    DegenerateProjectionError,
    InsufficientDataError,
    NumericalError,
    ParameterError,
    SbmError,
)
from .metrics import accuracy_report, gamma_of, noise_norm, surrogate_error
from .model import PlantedGraph, SbmParams, color_edges, expected_adjacency, sample_graph

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ContractError", "CorrectedPartition", "DegenerateProjectionError",
    "InsufficientDataError", "NumericalError", "ParameterError", "PartitionResult",
    "PlantedGraph", "SbmError", "SbmParams", "accuracy_report", "color_edges", "correction",
    "expected_adjacency", "full_partition", "gamma_of", "noise_norm", "sample_graph",
    "spectral_partition_original", "spectral_partition_simplified", "surrogate_error",
]
