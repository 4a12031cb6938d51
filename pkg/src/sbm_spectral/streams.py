"""Per-cell random streams.

A cell's generator depends only on ``(master_seed, *keys)`` through numpy's
``SeedSequence`` hashing, never on execution order or thread count.
"""
import numpy as np

GRAPH = 0
COLOR = 1
MC = 2


def cell_sequence(master_seed: int, *keys: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in keys))


def cell_rng(master_seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(cell_sequence(master_seed, *keys))


def cell_seed(master_seed: int, *keys: int) -> int:
    """A 63-bit integer seed for APIs that take plain integers."""
    state = cell_sequence(master_seed, *keys).generate_state(1, dtype=np.uint64)[0]
    return int(state >> np.uint64(1))
