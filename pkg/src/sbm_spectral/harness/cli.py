"""Command-line entry point: graph generation, partitioning, curves, sweeps,
fits and SVG plots."""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..algorithms import full_partition, spectral_partition_original, spectral_partition_simplified
from ..errors import DegenerateProjectionError, NumericalError, SbmError
from ..frontier import default_k_grid
from ..linalg import sin_angle_vectors
from ..metrics import gamma_with_matching
from ..model import SbmParams, planted_eigenvectors, read_graph_csv, sample_graph, write_graph_csv
from ..theory import chernoff_constants, chernoff_prediction, normal_prediction
from . import curves
from .fitting import fit_log_quarter, fit_scale, log_quarter_regressor, scaled_sin
from .io import Row, read_csv, write_csv
from .svg import Axes, Series, render_svg
from .sweep import CURVES, METHODS, SweepConfig, run_sweep

EXIT_OK, EXIT_PARAM, EXIT_NUMERIC, EXIT_PARTIAL = 0, 2, 3, 4
LINE_METHODS = {"quad", "chernoff-pred", "normal-pred", "logquarter"}
DASHED = {"normal-pred"}


def _params(ns) -> SbmParams:
    return SbmParams.from_fractions(ns.n, ns.a_frac, ns.b_frac)


def cmd_generate(ns) -> int:
    graph = sample_graph(_params(ns), ns.seed)
    write_graph_csv(graph, ns.out)
    print(json.dumps({"out": str(ns.out), "vertices": graph.params.size, "edges": graph.edge_count()}))
    return EXIT_OK


def cmd_partition(ns) -> int:
    graph = read_graph_csv(ns.graph)
    if ns.method == "simplified":
        res = spectral_partition_simplified(graph.adjacency)
        diag = res.diagnostics
    elif ns.method == "original":
        res = spectral_partition_original(graph.adjacency, graph.params.d)
        diag = res.diagnostics
    else:
        res = full_partition(graph, ns.seed)
        diag = res.initial.diagnostics
    gamma, matching = gamma_with_matching(res.side1, res.side2, graph.labels)
    side = np.zeros(graph.params.size, dtype=np.int64)
    side[res.side1] = 1
    side[res.side2] = 2
    path = Path(ns.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["vertex,side"] + [f"{v},{s}" for v, s in enumerate(side)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    _, u2 = planted_eigenvectors(graph.n)
    print(json.dumps({
        "method": ns.method,
        "gamma": gamma,
        "matching": matching,
        "sin_theta": sin_angle_vectors(u2, diag.v2),
        "lambda1": diag.lambda1,
        "lambda2": diag.lambda2,
    }))
    return EXIT_OK


def cmd_curves(ns) -> int:
    p = _params(ns)
    rows = curves.curve_rows(ns.kind, p.n, p.a, p.b, reps=ns.reps, seed=ns.seed)
    write_csv(rows, ns.out)
    print(json.dumps({"out": str(ns.out), "rows": len(rows)}))
    return EXIT_OK


def _sweep_config(ns) -> SweepConfig:
    flags = {
        "n_min": ns.n_min, "n_max": ns.n_max, "n_step": ns.n_step,
        "a_frac": ns.a_frac, "b_frac": ns.b_frac, "reps": ns.reps,
        "master_seed": ns.seed, "mc_reps": ns.mc_reps, "jobs": ns.jobs,
        "methods": tuple(ns.methods.split(",")) if ns.methods else None,
        "out_dir": str(ns.out),
    }
    if ns.config:
        return SweepConfig.from_json(ns.config, **flags)
    return SweepConfig(**{k: v for k, v in flags.items() if v is not None})


def cmd_sweep(ns) -> int:
    result = run_sweep(_sweep_config(ns))
    print(json.dumps({"out": str(ns.out), "rows": len(result.rows()), "failures": result.failures}))
    return EXIT_PARTIAL if result.failures else EXIT_OK


def _single_n(rows) -> tuple[int, float, float]:
    keys = {(r.n, r.a, r.b) for r in rows}
    if len(keys) != 1:
        raise SbmError("scale fits need rows from exactly one (n, a, b)")
    return keys.pop()


def _logquarter_rows(rows, C) -> list[Row]:
    n, a, b = max((r.n, r.a, r.b) for r in rows)
    gam = [r.gamma for r in rows if 0 < r.gamma < 2]
    lo, hi = min(gam), max(gam)
    out = []
    for k in default_k_grid(n):
        g = k / n
        if lo <= g <= hi and g > 0:
            s = min(1.0, C * float(log_quarter_regressor(g)))
            out.append(Row("logquarter", n, a, b, int(k), g, s, None, C))
    return out


def cmd_fit(ns) -> int:
    rows = read_csv(ns.data)
    if not rows:
        raise SbmError(f"{ns.data}: no rows")
    if ns.model == "logquarter":
        use = [r for r in rows if ns.method is None or r.method == ns.method]
        fit = fit_log_quarter([(r.sin_theta, r.gamma) for r in use])
        pred = _logquarter_rows(use, fit.constant) if ns.pred else None
    elif ns.model.startswith("scale:"):
        kind = ns.model.split(":", 1)[1]
        window = (ns.gamma_min, ns.gamma_max)
        if kind == "chernoff-pred":
            use = [r for r in rows if r.method == "chernoff-opt"] or rows
            n, a, b = _single_n(use)
            cc = chernoff_constants(n, a, b)
            raw = lambda g: chernoff_prediction(n, a, b, g, cc)  # noqa: E731
            pts = [(r.sin_theta, r.gamma) for r in use]
        elif kind == "normal-pred":
            use = [r for r in rows if r.method == "mc"] or rows
            n, a, b = _single_n(use)
            raw = lambda g: normal_prediction(n, g)  # noqa: E731
            pts = curves.mc_median_points(use)
        else:
            raise SbmError(f"unknown scale kind {kind!r}")
        pts = [(s, g) for s, g in pts if window[0] <= g <= window[1]]
        fit = fit_scale(raw, pts, model=ns.model)
        pred = None
        if ns.pred:
            ks = default_k_grid(n)
            gam = ks / n
            f = np.asarray(raw(gam))
            sins = scaled_sin(fit.constant, f)
            pred = [Row(kind, n, a, b, int(k), float(g), float(s), float(v), fit.constant)
                    for k, g, s, v in zip(ks, gam, sins, f)]
    else:
        raise SbmError(f"unknown model {ns.model!r}")
    out = Path(ns.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(asdict(fit), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if pred is not None:
        write_csv(pred, ns.pred)
    print(json.dumps(asdict(fit)))
    return EXIT_OK


def series_from_rows(rows, opacity_by: str | None = None) -> list[Series]:
    """One legend entry per method; line methods split per n so curves stay separate."""
    ns_all = sorted({r.n for r in rows})

    def alpha(n):
        if opacity_by != "n" or len(ns_all) == 1:
            return 1.0
        return 0.2 + 0.8 * ns_all.index(n) / (len(ns_all) - 1)

    order = [m for m in METHODS + ("logquarter",) if any(r.method == m for r in rows)]
    order += sorted({r.method for r in rows} - set(order))
    out = []
    for m in order:
        mrows = [r for r in rows if r.method == m]
        if m in LINE_METHODS:
            for i, n in enumerate(sorted({r.n for r in mrows})):
                nr = sorted((r for r in mrows if r.n == n), key=lambda r: (r.sin_theta, r.gamma))
                out.append(Series(m if i == 0 else "", [r.sin_theta for r in nr], [r.gamma for r in nr],
                                  mode="line", opacity=alpha(n), dashed=m in DASHED))
        else:
            out.append(Series(m, [r.sin_theta for r in mrows], [r.gamma for r in mrows],
                              opacity=[alpha(r.n) for r in mrows]))
    return out


def plot_rows(rows, out, opacity_by=None, title="") -> None:
    series = series_from_rows(rows, opacity_by)
    gmax = max((r.gamma for r in rows), default=0.5)
    ymax = max(0.1, math.ceil(gmax * 10) / 10)
    render_svg(series, Axes(ylim=(0.0, ymax), title=title), out)


def cmd_plot(ns) -> int:
    rows = [r for path in ns.data for r in read_csv(path)]
    plot_rows(rows, ns.out, ns.opacity_by, ns.title or "")
    print(json.dumps({"out": str(ns.out), "rows": len(rows)}))
    return EXIT_OK


def cmd_figure(ns) -> int:
    """Regenerate one standard chart (data CSV plus SVG) in a single command.

    ``chernoff``: quadratic curve, Chernoff solver and its scaled prediction.
    ``mc``: Chernoff solver, Monte Carlo band and the scaled normal prediction.
    ``sweep``: algorithm points over the size sweep with the log-quarter fit.
    """
    out = Path(ns.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    code = EXIT_OK
    if ns.which in ("chernoff", "mc"):
        p = SbmParams.from_fractions(ns.n, ns.a_frac, ns.b_frac)
        if ns.which == "chernoff":
            quad = curves.quad_rows(p.n, p.a, p.b)
            opt = curves.chernoff_opt_rows(p.n, p.a, p.b)
            pred, _ = curves.chernoff_pred_rows(p.n, p.a, p.b, opt)
            rows = quad + opt + pred
        else:
            opt = curves.chernoff_opt_rows(p.n, p.a, p.b)
            mc = curves.mc_rows(p.n, p.a, p.b, ns.reps, ns.seed)
            pred, _ = curves.normal_pred_rows(p.n, p.a, p.b, mc)
            rows = opt + mc + pred
    else:
        cfg = SweepConfig(n_min=ns.n_min, n_max=ns.n_max, n_step=ns.n_step, a_frac=ns.a_frac,
                          b_frac=ns.b_frac, reps=ns.sweep_reps, master_seed=ns.seed,
                          methods=("algorithm-simplified", "quad", "chernoff-opt", "mc"),
                          out_dir=str(out / "sweep"), mc_reps=ns.sweep_reps)
        result = run_sweep(cfg)
        rows = result.rows()
        algo = [r for r in rows if r.method == "algorithm-simplified"]
        fit = fit_log_quarter([(r.sin_theta, r.gamma) for r in algo])
        rows = rows + _logquarter_rows(algo, fit.constant)
        code = EXIT_PARTIAL if result.failures else EXIT_OK
    csv_path = out / f"{ns.which}.csv"
    svg_path = out / f"{ns.which}.svg"
    write_csv(rows, csv_path)
    plot_rows(rows, svg_path, "n" if ns.which == "sweep" else None,
              title=f"gamma vs sin theta ({ns.which})")
    print(json.dumps({"csv": str(csv_path), "svg": str(svg_path), "rows": len(rows)}))
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sbm-spectral", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def frac_args(p, n_required=True):
        p.add_argument("--n", type=int, required=n_required, default=500)
        p.add_argument("--a-frac", type=float, default=0.06)
        p.add_argument("--b-frac", type=float, default=0.04)

    p = sub.add_parser("generate", help="sample a planted graph to CSV")
    frac_args(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("partition", help="run a partition algorithm on a graph CSV")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--method", choices=("simplified", "original", "full"), default="simplified")
    p.add_argument("--seed", type=int, default=0, help="edge-colouring seed for --method full")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("curves", help="emit one theoretical or frontier curve")
    p.add_argument("--kind", choices=CURVES, required=True)
    frac_args(p)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("sweep", help="run the size sweep")
    p.add_argument("--config", type=Path, help="JSON file with SweepConfig fields; flags override")
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--n-step", type=int)
    p.add_argument("--a-frac", type=float)
    p.add_argument("--b-frac", type=float)
    p.add_argument("--reps", type=int)
    p.add_argument("--mc-reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--methods", help=f"comma-separated subset of {','.join(METHODS)}")
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="fit a one-parameter curve to CSV rows")
    p.add_argument("--model", required=True, help="scale:chernoff-pred, scale:normal-pred or logquarter")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--method", help="restrict logquarter fits to one method")
    p.add_argument("--gamma-min", type=float, default=curves.FIT_WINDOW[0])
    p.add_argument("--gamma-max", type=float, default=curves.FIT_WINDOW[1])
    p.add_argument("--pred", type=Path, help="also write the fitted curve as CSV rows")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("plot", help="render CSV rows as an SVG scatter/line chart")
    p.add_argument("--data", type=Path, nargs="+", required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--opacity-by", choices=("n",))
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("figure", help="regenerate a standard chart end to end")
    p.add_argument("--which", choices=("chernoff", "mc", "sweep"), required=True)
    frac_args(p, n_required=False)
    p.add_argument("--reps", type=int, default=curves.MC_REPS_SINGLE)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--n-min", type=int, default=500)
    p.add_argument("--n-max", type=int, default=1000)
    p.add_argument("--n-step", type=int, default=25)
    p.add_argument("--sweep-reps", type=int, default=10)
    p.add_argument("--out-dir", type=Path, required=True)
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except (NumericalError, DegenerateProjectionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SbmError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
