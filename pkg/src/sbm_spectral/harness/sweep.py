"""Experiment sweep over graph sizes: algorithm cells plus per-n curves."""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from ..algorithms import full_partition, spectral_partition_original, spectral_partition_simplified
from ..errors import InsufficientDataError, ParameterError
from ..linalg import sin_angle_subspaces, sin_angle_vectors
from ..metrics import gamma_of, noise_norm, planted_subspace, surrogate_error
from ..model import SbmParams, planted_eigenvectors, sample_graph
from ..streams import COLOR, GRAPH, cell_seed
from . import curves
from .fitting import fit_log_quarter
from .io import Row, write_csv

ALGORITHMS = ("algorithm-simplified", "algorithm-original", "algorithm-full")
CURVES = ("quad", "chernoff-opt", "chernoff-pred", "mc", "normal-pred")
METHODS = ALGORITHMS + CURVES
DEFAULT_METHODS = ("algorithm-simplified", "quad", "chernoff-opt", "mc")

CELL_HEADER = ("method", "n", "a", "b", "rep", "seed", "gamma", "sin_theta_vec",
               "sin_theta_subspace", "noise_ratio", "surrogate_error", "status")


@dataclass(frozen=True)
class SweepConfig:
    n_min: int = 500
    n_max: int = 1000
    n_step: int = 25
    a_frac: float = 0.06
    b_frac: float = 0.04
    reps: int = 10
    master_seed: int = 2024
    methods: tuple = DEFAULT_METHODS
    out_dir: str | None = None
    mc_reps: int = 10
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        if not (1 <= self.n_min <= self.n_max) or self.n_step < 1:
            raise ParameterError("need 1 <= n_min <= n_max and n_step >= 1")
        if not 0 < self.b_frac < self.a_frac < 1:
            raise ParameterError("need 0 < b_frac < a_frac < 1")
        if self.reps < 1 or self.mc_reps < 1 or self.jobs < 1:
            raise ParameterError("reps, mc_reps and jobs must be positive")
        unknown = set(self.methods) - set(METHODS)
        if unknown or not self.methods:
            raise ParameterError(f"unknown methods: {sorted(unknown)}")

    @property
    def sizes(self) -> list[int]:
        return list(range(self.n_min, self.n_max + 1, self.n_step))

    def params(self, n: int) -> SbmParams:
        return SbmParams.from_fractions(n, self.a_frac, self.b_frac)

    @classmethod
    def from_json(cls, path, **overrides) -> "SweepConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ParameterError(f"unknown config keys: {sorted(extra)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


@dataclass(frozen=True)
class CellRecord:
    method: str
    n: int
    a: float
    b: float
    rep: int
    seed: int
    gamma: float = math.nan
    sin_theta_vec: float = math.nan
    sin_theta_subspace: float = math.nan
    noise_ratio: float = math.nan
    surrogate_error: float = math.nan
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def row(self) -> Row:
        return Row(self.method, self.n, self.a, self.b, self.seed, self.gamma,
                   self.sin_theta_vec, self.noise_ratio, self.surrogate_error)


@dataclass
class SweepResult:
    config: SweepConfig
    cells: list = field(default_factory=list)
    curve_rows: dict = field(default_factory=dict)  # n -> rows
    curve_errors: dict = field(default_factory=dict)  # (n, method) -> message
    fits: dict = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return sum(not c.ok for c in self.cells) + len(self.curve_errors)

    def rows(self) -> list[Row]:
        out = []
        by_n: dict[int, list[CellRecord]] = {}
        for c in self.cells:
            by_n.setdefault(c.n, []).append(c)
        for n in self.config.sizes:
            out.extend(c.row() for c in by_n.get(n, []) if c.ok)
            out.extend(self.curve_rows.get(n, []))
        return out

    def summary(self) -> dict:
        per_n = {}
        for n in self.config.sizes:
            entry = {}
            for m in ALGORITHMS:
                cs = [c for c in self.cells if c.n == n and c.method == m and c.ok]
                if cs:
                    entry[m] = {
                        "mean_gamma": float(np.mean([c.gamma for c in cs])),
                        "mean_sin_theta": float(np.mean([c.sin_theta_vec for c in cs])),
                        "mean_noise_ratio": float(np.mean([c.noise_ratio for c in cs])),
                        "mean_scaled_surrogate": float(np.mean([math.sqrt(n) * c.surrogate_error for c in cs])),
                        "cells": len(cs),
                    }
            per_n[str(n)] = entry
        return {
            # where and how parallel the run was does not change its content
            "config": {k: (list(v) if isinstance(v, tuple) else v)
                       for k, v in asdict(self.config).items() if k not in ("out_dir", "jobs")},
            "per_n": per_n,
            "fits": self.fits,
            "failures": self.failures,
            "curve_errors": {f"{n}:{m}": msg for (n, m), msg in sorted(self.curve_errors.items())},
        }

    def write(self, out_dir) -> dict:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "experiment": out / "experiment.csv",
            "cells": out / "cells.csv",
            "summary": out / "summary.json",
        }
        write_csv(self.rows(), paths["experiment"])
        write_csv([asdict(c) for c in self.cells], paths["cells"], CELL_HEADER)
        paths["summary"].write_text(json.dumps(self.summary(), indent=2, sort_keys=True) + "\n",
                                    encoding="utf-8")
        return paths


def _error_text(exc: BaseException) -> str:
    return f"error: {type(exc).__name__}: {exc}".replace("\n", " ")


def run_cell(cfg: SweepConfig, n: int, rep: int) -> list[CellRecord]:
    """All requested algorithm variants on the graph of cell ``(n, rep)``."""
    methods = [m for m in ALGORITHMS if m in cfg.methods]
    if not methods:
        return []
    params = cfg.params(n)
    seed = cell_seed(cfg.master_seed, GRAPH, n, rep)
    base = dict(n=n, a=params.a, b=params.b, rep=rep, seed=seed)
    try:
        graph = sample_graph(params, seed)
        ratio = noise_norm(graph) / math.sqrt(params.d)
    except Exception as exc:  # recorded, the sweep carries on
        return [CellRecord(m, **base, status=_error_text(exc)) for m in methods]

    _, u2 = planted_eigenvectors(n)
    planted = planted_subspace(n)
    surrogate = None
    records = []
    for m in methods:
        try:
            if m == "algorithm-full":
                res = full_partition(graph, cell_seed(cfg.master_seed, COLOR, n, rep))
                diag = res.initial.diagnostics
            elif m == "algorithm-original":
                res = spectral_partition_original(graph.adjacency, params.d)
                diag = res.diagnostics
            else:
                res = spectral_partition_simplified(graph.adjacency)
                diag = res.diagnostics
                surrogate = surrogate_error(graph, diag.v2)
            if surrogate is None:
                surrogate = surrogate_error(graph)
            records.append(CellRecord(
                m, **base,
                gamma=gamma_of(res, graph.labels),
                sin_theta_vec=sin_angle_vectors(u2, diag.v2),
                sin_theta_subspace=sin_angle_subspaces(diag.eigenspace, planted),
                noise_ratio=ratio,
                surrogate_error=surrogate,
            ))
        except Exception as exc:
            records.append(CellRecord(m, **base, status=_error_text(exc)))
    return records


def run_curves(cfg: SweepConfig, n: int):
    """Requested curves at one n. Returns (rows, fits, errors)."""
    params = cfg.params(n)
    a, b = params.a, params.b
    wanted = [m for m in CURVES if m in cfg.methods]
    rows: dict[str, list[Row]] = {}
    fits, errors = {}, {}

    def attempt(method, fn):
        try:
            return fn()
        except Exception as exc:
            errors[method] = _error_text(exc)
            return None

    opt = mc = None
    if "quad" in wanted:
        rows["quad"] = attempt("quad", lambda: curves.quad_rows(n, a, b))
    if "chernoff-opt" in wanted or "chernoff-pred" in wanted:
        opt = attempt("chernoff-opt", lambda: curves.chernoff_opt_rows(n, a, b))
        if "chernoff-opt" in wanted:
            rows["chernoff-opt"] = opt
    if "mc" in wanted or "normal-pred" in wanted:
        mc = attempt("mc", lambda: curves.mc_rows(n, a, b, cfg.mc_reps, cfg.master_seed))
        if "mc" in wanted:
            rows["mc"] = mc
    if "chernoff-pred" in wanted and opt:
        got = attempt("chernoff-pred", lambda: curves.chernoff_pred_rows(n, a, b, opt))
        if got:
            rows["chernoff-pred"], fit = got
            fits["chernoff-pred"] = asdict(fit)
    if "normal-pred" in wanted and mc:
        got = attempt("normal-pred", lambda: curves.normal_pred_rows(n, a, b, mc))
        if got:
            rows["normal-pred"], fit = got
            fits["normal-pred"] = asdict(fit)
    ordered = [r for m in CURVES if rows.get(m) for r in rows[m]]
    return ordered, fits, errors


def _cell_task(args):
    return run_cell(*args)


def _curve_task(args):
    return run_curves(*args)


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """Run every cell and curve; output order is fixed by (n, rep, method)."""
    result = SweepResult(cfg)
    cell_args = [(cfg, n, rep) for n in cfg.sizes for rep in range(cfg.reps)]
    curve_args = [(cfg, n) for n in cfg.sizes]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            cell_out = list(pool.map(_cell_task, cell_args))
            curve_out = list(pool.map(_curve_task, curve_args))
    else:
        cell_out = [_cell_task(a) for a in cell_args]
        curve_out = [_curve_task(a) for a in curve_args]

    for records in cell_out:
        result.cells.extend(records)
    pred_fits = {}
    for (_, n), (rows, fits, errors) in zip(curve_args, curve_out):
        result.curve_rows[n] = rows
        if fits:
            pred_fits[str(n)] = fits
        for m, msg in errors.items():
            result.curve_errors[(n, m)] = msg

    algo_fits = {}
    for m in ALGORITHMS:
        pts = [(c.sin_theta_vec, c.gamma) for c in result.cells if c.method == m and c.ok]
        if not pts:
            continue
        try:
            algo_fits[m] = asdict(fit_log_quarter(pts))
        except InsufficientDataError as exc:
            algo_fits[m] = {"model": "logquarter", "error": str(exc)}
    result.fits = {"logquarter": algo_fits, "scale": pred_fits}
    if cfg.out_dir is not None:
        result.write(cfg.out_dir)
    return result


