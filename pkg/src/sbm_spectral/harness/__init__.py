"""Sweeps, fits, CSV/SVG output and the command-line interface."""
from .fitting import FitResult, fit_log_quarter, fit_scale, r_squared
from .io import HEADER, Row, read_csv, write_csv
from .svg import Axes, Series, render_svg
from .sweep import SweepConfig, SweepResult, run_sweep

__all__ = [
    "Axes", "FitResult", "HEADER", "Row", "Series", "SweepConfig", "SweepResult",
    "fit_log_quarter", "fit_scale", "r_squared", "read_csv", "render_svg", "run_sweep", "write_csv",
]
