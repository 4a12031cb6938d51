"""Two-block stochastic block model: parameters, sampling, edge coloring."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ContractError, ParameterError


@dataclass(frozen=True)
class SbmParams:
    """Block size ``n`` and affinities ``a > b``.

    Within-block pairs are joined with probability ``a/n``, cross-block pairs
    with probability ``b/n``. The graph has ``2n`` vertices.
    """

    n: int
    a: float
    b: float

    def __post_init__(self):
        validate_params(self.n, self.a, self.b)

    @property
    def d(self) -> float:
        return self.a + self.b

    @property
    def size(self) -> int:
        return 2 * self.n

    @property
    def p_in(self) -> float:
        return self.a / self.n

    @property
    def p_out(self) -> float:
        return self.b / self.n

    @classmethod
    def from_fractions(cls, n: int, a_frac: float, b_frac: float) -> "SbmParams":
        return cls(n, a_frac * n, b_frac * n)


def validate_params(n, a, b):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ParameterError(f"block size must be a positive integer, got {n!r}")
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ParameterError("affinities must be finite")
    if not 0 < b < a < n:
        raise ParameterError(f"need 0 < b < a < n, got n={n}, a={a}, b={b}")


def labels_for(n: int) -> np.ndarray:
    """Canonical labels: vertices ``0..n-1`` are community 1, the rest 2."""
    return np.repeat(np.array([1, 2], dtype=np.int8), n)


@dataclass(frozen=True, eq=False)
class PlantedGraph:
    params: SbmParams
    adjacency: np.ndarray
    labels: np.ndarray
    seed: int

    def __post_init__(self):
        adj = self.adjacency
        size = self.params.size
        if adj.shape != (size, size):
            raise ContractError(f"adjacency must be {size}x{size}, got {adj.shape}")
        if adj.dtype != np.bool_:
            raise ContractError("adjacency must be boolean")
        if np.any(np.diagonal(adj)):
            raise ContractError("adjacency must have an empty diagonal")
        if not np.array_equal(adj, adj.T):
            raise ContractError("adjacency must be symmetric")
        adj.setflags(write=False)
        self.labels.setflags(write=False)

    @property
    def n(self) -> int:
        return self.params.n

    def as_float(self) -> np.ndarray:
        return self.adjacency.astype(np.float64)

    def edge_count(self) -> int:
        return int(np.count_nonzero(np.triu(self.adjacency, 1)))

    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges ``u < v`` in row-major order."""
        u, v = np.nonzero(np.triu(self.adjacency, 1))
        return np.column_stack([u, v])


@dataclass(frozen=True, eq=False)
class EdgeColoring:
    red: np.ndarray
    blue: np.ndarray


def expected_adjacency(params: SbmParams) -> np.ndarray:
    """E[A] with ``a/n`` on the within blocks, diagonal included, and ``b/n`` across.

    Keeping the diagonal makes the matrix exactly rank two with eigenvalues
    ``a+b`` and ``a-b``.
    """
    if not isinstance(params, SbmParams):
        raise ParameterError("expected an SbmParams instance")
    n = params.n
    out = np.full((2 * n, 2 * n), params.p_out)
    out[:n, :n] = params.p_in
    out[n:, n:] = params.p_in
    return out


def _probability_matrix(n: int, p_in: float, p_out: float) -> np.ndarray:
    probs = np.full((2 * n, 2 * n), p_out)
    probs[:n, :n] = p_in
    probs[n:, n:] = p_in
    return probs


def _symmetric_bernoulli(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    size = probs.shape[0]
    upper = np.triu(rng.random((size, size)) < probs, 1)
    return upper | upper.T


def sample_adjacency(n: int, p_in: float, p_out: float, seed: int) -> np.ndarray:
    """Raw two-block Bernoulli sampler; probabilities may be 0 or 1."""
    if not (0.0 <= p_in <= 1.0 and 0.0 <= p_out <= 1.0):
        raise ParameterError("edge probabilities must lie in [0, 1]")
    rng = np.random.default_rng(int(seed))
    return _symmetric_bernoulli(_probability_matrix(n, p_in, p_out), rng)


def sample_graph(params: SbmParams, seed: int) -> PlantedGraph:
    """Draw a planted graph. Deterministic in ``(params, seed)`` (numpy PCG64)."""
    if not isinstance(params, SbmParams):
        raise ParameterError("expected an SbmParams instance")
    adj = sample_adjacency(params.n, params.p_in, params.p_out, seed)
    return PlantedGraph(params, adj, labels_for(params.n), int(seed))


def graph_from_adjacency(params: SbmParams, adjacency, seed: int = 0) -> PlantedGraph:
    adj = np.array(adjacency, dtype=bool)
    return PlantedGraph(params, adj, labels_for(params.n), int(seed))


def color_edges(graph: PlantedGraph, seed: int) -> EdgeColoring:
    """Color each edge red with probability 1/2, otherwise blue."""
    adj = graph.adjacency
    rng = np.random.default_rng(int(seed))
    coin = np.triu(rng.random(adj.shape) < 0.5, 1)
    coin = coin | coin.T
    red = adj & coin
    blue = adj & ~coin
    return EdgeColoring(red, blue)


def degree(graph: PlantedGraph, v: int) -> int:
    size = graph.params.size
    if not 0 <= v < size:
        raise IndexError(f"vertex {v} out of range [0, {size})")
    return int(np.count_nonzero(graph.adjacency[v]))


def degrees(adjacency: np.ndarray) -> np.ndarray:
    return np.asarray(adjacency != 0).sum(axis=1)


# -- CSV edge-list format --------------------------------------------------

def _fmt_real(x: float) -> str:
    return format(float(x), ".12g")


def write_graph_csv(graph: PlantedGraph, path) -> None:
    """Header ``# sbm n=.. a=.. b=.. seed=..`` then one ``u,v`` line per edge."""
    p = graph.params
    lines = [f"# sbm n={p.n} a={_fmt_real(p.a)} b={_fmt_real(p.b)} seed={graph.seed}"]
    lines.extend(f"{u},{v}" for u, v in graph.edges())
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_graph_csv(path) -> PlantedGraph:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text or not text[0].startswith("# sbm"):
        raise ContractError(f"{path}: missing '# sbm' header")
    fields = dict(tok.split("=", 1) for tok in text[0][len("# sbm"):].split())
    try:
        params = SbmParams(int(fields["n"]), float(fields["a"]), float(fields["b"]))
        seed = int(fields["seed"])
    except KeyError as exc:
        raise ContractError(f"{path}: header lacks {exc}") from None
    size = params.size
    adj = np.zeros((size, size), dtype=bool)
    for lineno, line in enumerate(text[1:], start=2):
        line = line.strip()
        if not line:
            continue
        u, v = (int(t) for t in line.split(","))
        if not (0 <= u < v < size):
            raise ContractError(f"{path}:{lineno}: bad edge {u},{v}")
        adj[u, v] = adj[v, u] = True
    return PlantedGraph(params, adj, labels_for(params.n), seed)


def planted_eigenvectors(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit eigenvectors ``u1`` (all equal) and ``u2`` (+ on block 1, - on block 2) of E[A]."""
    u1 = np.full(2 * n, 1.0 / np.sqrt(2 * n))
    u2 = u1.copy()
    u2[n:] *= -1.0
    return u1, u2
