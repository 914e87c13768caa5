"""Minimal deterministic SVG line plots (polylines plus shaded bands).

Only what the run artifacts need: linear or log10 axes, a handful of series
with optional +/-1 std bands, tick labels and a legend.  Output contains no
timestamps or random ids, so identical data gives identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

_PALETTE = ("#1f3b73", "#c24f1e", "#2e7d4f", "#8d2f6f", "#6b6b6b", "#b08a00")


@dataclass
class Series:
    x: list
    y: list
    label: str = ""
    band_lo: list | None = None
    band_hi: list | None = None


@dataclass
class Figure:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    xlog: bool = False
    ylog: bool = False
    series: list = field(default_factory=list)

    def add(self, x, y, label="", band_lo=None, band_hi=None):
        self.series.append(Series(list(x), list(y), label, band_lo, band_hi))


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo: float, hi: float, log: bool):
    if log:
        lo_d = math.floor(math.log10(lo))
        hi_d = math.ceil(math.log10(hi))
        return [10.0**d for d in range(int(lo_d), int(hi_d) + 1)]
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / 4.0
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((s for s in (1.0, 2.0, 5.0, 10.0) if s * mag >= raw), default=10.0) * mag
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return ticks


def write_svg(fig: Figure, path, width: int = 660, height: int = 430) -> None:
    margin_l, margin_r, margin_t, margin_b = 62, 16, 28, 44
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b

    xs, ys = [], []
    for s in fig.series:
        pts = [
            (x, y) for x, y in zip(s.x, s.y)
            if math.isfinite(x) and math.isfinite(y)
            and not (fig.xlog and x <= 0) and not (fig.ylog and y <= 0)
        ]
        xs += [p[0] for p in pts]
        ys += [p[1] for p in pts]
        for band in (s.band_lo, s.band_hi):
            if band is not None:
                ys += [v for v in band if math.isfinite(v) and not (fig.ylog and v <= 0)]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    if not fig.ylog:
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad

    def tx(v):
        a, b = (math.log10(x_lo), math.log10(x_hi)) if fig.xlog else (x_lo, x_hi)
        u = math.log10(v) if fig.xlog else v
        return margin_l + (u - a) / (b - a) * plot_w

    def ty(v):
        a, b = (math.log10(y_lo), math.log10(y_hi)) if fig.ylog else (y_lo, y_hi)
        u = math.log10(v) if fig.ylog else v
        return margin_t + plot_h - (u - a) / (b - a) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin_l}" y="{margin_t}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#222" stroke-width="1"/>',
    ]
    if fig.title:
        out.append(
            f'<text x="{width / 2:.1f}" y="{margin_t - 10}" text-anchor="middle" '
            f'font-size="13">{fig.title}</text>'
        )

    for t in _ticks(x_lo, x_hi, fig.xlog):
        if not (x_lo <= t <= x_hi):
            continue
        px = tx(t)
        out.append(
            f'<line x1="{px:.1f}" y1="{margin_t + plot_h}" x2="{px:.1f}" '
            f'y2="{margin_t + plot_h + 4}" stroke="#222"/>'
        )
        out.append(
            f'<text x="{px:.1f}" y="{margin_t + plot_h + 16}" text-anchor="middle">{_fmt(t)}</text>'
        )
    for t in _ticks(y_lo, y_hi, fig.ylog):
        if not (y_lo <= t <= y_hi):
            continue
        py = ty(t)
        out.append(
            f'<line x1="{margin_l - 4}" y1="{py:.1f}" x2="{margin_l}" y2="{py:.1f}" stroke="#222"/>'
        )
        out.append(
            f'<text x="{margin_l - 7}" y="{py + 3.5:.1f}" text-anchor="end">{_fmt(t)}</text>'
        )
    if fig.xlabel:
        out.append(
            f'<text x="{margin_l + plot_w / 2:.1f}" y="{height - 8}" '
            f'text-anchor="middle">{fig.xlabel}</text>'
        )
    if fig.ylabel:
        cx, cy = 14, margin_t + plot_h / 2
        out.append(
            f'<text x="{cx}" y="{cy:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 {cx} {cy:.1f})">{fig.ylabel}</text>'
        )

    def visible(x, y):
        if not (math.isfinite(x) and math.isfinite(y)):
            return False
        if fig.xlog and x <= 0 or fig.ylog and y <= 0:
            return False
        return x_lo <= x <= x_hi and y_lo <= y <= y_hi

    for i, s in enumerate(fig.series):
        color = _PALETTE[i % len(_PALETTE)]
        if s.band_lo is not None and s.band_hi is not None:
            fwd = [(x, v) for x, v in zip(s.x, s.band_hi) if visible(x, v)]
            rev = [(x, v) for x, v in zip(s.x, s.band_lo) if visible(x, v)][::-1]
            if len(fwd) > 1 and len(rev) > 1:
                pts = " ".join(f"{tx(x):.2f},{ty(y):.2f}" for x, y in fwd + rev)
                out.append(f'<polygon points="{pts}" fill="{color}" fill-opacity="0.18"/>')
        pts = [(x, y) for x, y in zip(s.x, s.y) if visible(x, y)]
        if len(pts) > 1:
            joined = " ".join(f"{tx(x):.2f},{ty(y):.2f}" for x, y in pts)
            out.append(
                f'<polyline points="{joined}" fill="none" stroke="{color}" stroke-width="1.6"/>'
            )
        elif len(pts) == 1:
            out.append(
                f'<circle cx="{tx(pts[0][0]):.2f}" cy="{ty(pts[0][1]):.2f}" r="3" fill="{color}"/>'
            )
        if s.label:
            ly = margin_t + 14 + 15 * i
            lx = margin_l + plot_w - 150
            out.append(
                f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
                f'stroke="{color}" stroke-width="1.6"/>'
            )
            out.append(f'<text x="{lx + 23}" y="{ly}">{s.label}</text>')

    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
