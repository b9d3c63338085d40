"""Minimal dependency-free SVG line/marker plots drawn from CSV files.

Plots are a pure function of the CSV they are built from, so a figure can
always be regenerated from its data.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

__all__ = ["Series", "read_csv_columns", "plot_csv", "render_svg"]

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 55


@dataclass
class Series:
    """One curve: CSV column names for x and y, and how to draw it."""

    x: str
    y: str
    label: str = ""
    style: str = "line"       # "line", "markers" or "both"
    where: tuple | None = None  # (column, value): keep rows with column == value
    log_y: bool = False


def read_csv_columns(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        return {}
    cols = {k: [] for k in rows[0]}
    for r in rows:
        for k, v in r.items():
            cols[k].append(v)
    return cols


def _num(v):
    try:
        return float(v)
    except (TypeError, ValueError):
        return math.nan


def _nice_ticks(lo, hi, n=5):
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw),
               default=10 * mag)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _fmt_tick(t):
    return f"{t:.4g}"


def render_svg(curves, title="", xlabel="", ylabel="", log_y=False):
    """Render ``[(label, style, xs, ys), ...]`` to an SVG string."""
    pts = [(x, y) for _, _, xs, ys in curves for x, y in zip(xs, ys)
           if math.isfinite(x) and math.isfinite(y) and (not log_y or y > 0)]
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    tf = (lambda v: math.log10(v)) if log_y else (lambda v: v)
    xs_all = [p[0] for p in pts]
    ys_all = [tf(p[1]) for p in pts]
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM

    def sx(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return TOP + (1 - (y - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
           f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" '
           f'fill="none" stroke="black"/>']
    for t in _nice_ticks(x0, x1):
        X = sx(t)
        out.append(f'<line x1="{X:.2f}" y1="{TOP + ph}" x2="{X:.2f}" '
                   f'y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{TOP + ph + 18}" '
                   f'text-anchor="middle">{_fmt_tick(t)}</text>')
    for t in _nice_ticks(y0, y1):
        Y = sy(t)
        lab = f"1e{t:g}" if log_y else _fmt_tick(t)
        out.append(f'<line x1="{LEFT - 5}" y1="{Y:.2f}" x2="{LEFT}" '
                   f'y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{Y + 4:.2f}" '
                   f'text-anchor="end">{lab}</text>')
    if y0 < 0 < y1 and not log_y:
        out.append(f'<line x1="{LEFT}" y1="{sy(0):.2f}" x2="{LEFT + pw}" '
                   f'y2="{sy(0):.2f}" stroke="#bbbbbb" stroke-dasharray="4 3"/>')
    for i, (label, style, xs, ys) in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        good = [(sx(x), sy(tf(y))) for x, y in zip(xs, ys)
                if math.isfinite(x) and math.isfinite(y) and (not log_y or y > 0)]
        if style in ("line", "both") and len(good) > 1:
            path = " ".join(f"{X:.2f},{Y:.2f}" for X, Y in good)
            out.append(f'<polyline points="{path}" fill="none" stroke="{color}" '
                       f'stroke-width="1.5"/>')
        if style in ("markers", "both"):
            for X, Y in good:
                out.append(f'<circle cx="{X:.2f}" cy="{Y:.2f}" r="3" '
                           f'fill="{color}"/>')
        if label:
            ly = TOP + 16 + 16 * i
            out.append(f'<rect x="{LEFT + pw - 150}" y="{ly - 9}" width="10" '
                       f'height="10" fill="{color}"/>')
            out.append(f'<text x="{LEFT + pw - 135}" y="{ly}">{escape(label)}</text>')
    out.append(f'<text x="{W / 2}" y="22" text-anchor="middle" '
               f'font-size="14">{escape(title)}</text>')
    out.append(f'<text x="{LEFT + pw / 2}" y="{H - 12}" '
               f'text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {TOP + ph / 2})">{escape(ylabel)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_csv(csv_path, svg_path, series, title="", xlabel="", ylabel=""):
    """Draw ``series`` (list of :class:`Series`) from ``csv_path`` into ``svg_path``."""
    cols = read_csv_columns(csv_path)
    curves = []
    log_y = any(s.log_y for s in series)
    for s in series:
        xs = [_num(v) for v in cols.get(s.x, [])]
        ys = [_num(v) for v in cols.get(s.y, [])]
        if s.where is not None:
            col, val = s.where
            keep = [str(v) == str(val) for v in cols.get(col, [])]
            xs = [x for x, k in zip(xs, keep) if k]
            ys = [y for y, k in zip(ys, keep) if k]
        curves.append((s.label, s.style, xs, ys))
    text = render_svg(curves, title=title, xlabel=xlabel, ylabel=ylabel, log_y=log_y)
    with open(svg_path, "w") as fh:
        fh.write(text)
    return svg_path
