"""Minimal dependency-free SVG scatter/line charts."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 800, 600
MARGIN = dict(left=80, right=200, top=50, bottom=70)

PALETTE = {
    "quad": "#d62728",
    "chernoff-opt": "#1f77b4",
    "chernoff-pred": "#1f77b4",
    "mc": "#2ca02c",
    "normal-pred": "#2ca02c",
    "algorithm-simplified": "#ff7f0e",
    "algorithm-original": "#8c564b",
    "algorithm-full": "#e377c2",
    "logquarter": "#9467bd",
}
FALLBACK = ("#17becf", "#bcbd22", "#7f7f7f", "#393b79", "#637939")


@dataclass
class Series:
    label: str
    xs: list
    ys: list
    color: str | None = None
    mode: str = "points"  # "points" or "line"
    opacity: object = 1.0  # scalar or one value per point
    dashed: bool = False
    radius: float = 2.5


@dataclass
class Axes:
    xlabel: str = "sin theta"
    ylabel: str = "gamma"
    xlim: tuple = (0.0, 1.0)
    ylim: tuple = (0.0, 1.0)
    title: str = ""
    ticks: int = 5



def _opacities(s: Series) -> list[float]:
    if isinstance(s.opacity, (int, float)):
        return [float(s.opacity)] * len(s.xs)
    op = [float(o) for o in s.opacity]
    if len(op) != len(s.xs):
        raise ValueError(f"series {s.label!r}: opacity length mismatch")
    return op


def render_svg_text(series, axes: Axes | None = None) -> str:
    axes = axes or Axes()
    x0, x1 = axes.xlim
    y0, y1 = axes.ylim
    if not (x1 > x0 and y1 > y0):
        raise ValueError("axis limits must be increasing")
    pl, pr = MARGIN["left"], WIDTH - MARGIN["right"]
    pt, pb = MARGIN["top"], HEIGHT - MARGIN["bottom"]

    def sx(x):
        return pl + (x - x0) / (x1 - x0) * (pr - pl)

    def sy(y):
        return pb - (y - y0) / (y1 - y0) * (pb - pt)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<g id="axes" stroke="black" stroke-width="1">'
        f'<line x1="{pl}" y1="{pb}" x2="{pr}" y2="{pb}"/>'
        f'<line x1="{pl}" y1="{pb}" x2="{pl}" y2="{pt}"/></g>',
    ]
    tick = ['<g id="ticks" font-family="sans-serif" font-size="12">']
    for i in range(axes.ticks + 1):
        xv = x0 + (x1 - x0) * i / axes.ticks
        yv = y0 + (y1 - y0) * i / axes.ticks
        X, Y = sx(xv), sy(yv)
        tick.append(f'<line x1="{X:.2f}" y1="{pb}" x2="{X:.2f}" y2="{pb + 5}" stroke="black"/>')
        tick.append(f'<text x="{X:.2f}" y="{pb + 20}" text-anchor="middle">{xv:.2f}</text>')
        tick.append(f'<line x1="{pl - 5}" y1="{Y:.2f}" x2="{pl}" y2="{Y:.2f}" stroke="black"/>')
        tick.append(f'<text x="{pl - 8}" y="{Y + 4:.2f}" text-anchor="end">{yv:.2f}</text>')
    tick.append("</g>")
    out.extend(tick)
    out.append(
        f'<text x="{(pl + pr) / 2:.1f}" y="{HEIGHT - 20}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{escape(axes.xlabel)}</text>'
    )
    out.append(
        f'<text x="20" y="{(pt + pb) / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14" transform="rotate(-90 20 {(pt + pb) / 2:.1f})">{escape(axes.ylabel)}</text>'
    )
    if axes.title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" font-family="sans-serif" '
            f'font-size="16">{escape(axes.title)}</text>'
        )

    legend = ['<g id="legend" font-family="sans-serif" font-size="12">']
    slot = 0
    for idx, s in enumerate(series):
        color = s.color or PALETTE.get(s.label, FALLBACK[idx % len(FALLBACK)])
        op = _opacities(s)
        pts = [(x, y, o) for x, y, o in zip(s.xs, s.ys, op)
               if math.isfinite(x) and math.isfinite(y)]
        out.append(f'<g class="series" data-label="{escape(s.label)}">')
        if s.mode == "line" and len(pts) > 1:
            d = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y, _ in pts)
            dash = ' stroke-dasharray="6,4"' if s.dashed else ""
            out.append(f'<polyline points="{d}" fill="none" stroke="{color}" stroke-width="2" '
                       f'stroke-opacity="{max(o for *_, o in pts):.3f}"{dash}/>')
        elif s.mode != "line":
            for x, y, o in pts:
                out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="{s.radius}" '
                           f'fill="{color}" fill-opacity="{o:.3f}"/>')
        out.append("</g>")
        if not s.label:
            continue
        ly = pt + 10 + 20 * slot
        slot += 1
        lx = pr + 20
        if s.mode == "line":
            legend.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        else:
            legend.append(f'<circle cx="{lx + 10}" cy="{ly}" r="4" fill="{color}"/>')
        legend.append(f'<text x="{lx + 28}" y="{ly + 4}">{escape(s.label)}</text>')
    legend.append("</g>")
    out.extend(legend)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(series, axes: Axes | None, path) -> None:
    text = render_svg_text(series, axes)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
