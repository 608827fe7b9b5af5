"""Minimal static SVG line charts.

Output depends only on the input series; numbers are written with fixed
precision so identical data gives byte-identical files.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")

WIDTH, HEIGHT = 760, 480
LEFT, RIGHT, TOP, BOTTOM = 80, 190, 40, 60


def _ticks(lo, hi, count=5):
    if hi == lo:
        return [lo]
    step = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(step))
    for m in (1, 2, 5, 10):
        if m * mag >= step:
            step = m * mag
            break
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-9 * step:
        out.append(round(v, 12))
        v += step
    return out


def _fmt(v):
    return f"{v:.2f}"


def _label(v):
    return f"{v:g}"


def line_chart(series, title="", xlabel="", ylabel="", log_y=False) -> str:
    """Render ``{name: [(x, y), ...]}`` as one polyline per entry.

    Series are drawn in the order given. With ``log_y`` the y values must be
    positive and are plotted on a base-10 log axis.
    """
    pts = {name: [(float(x), float(y)) for x, y in data] for name, data in series.items()}
    if log_y:
        pts = {k: [(x, math.log10(y)) for x, y in v if y > 0] for k, v in pts.items()}
    xs = [x for v in pts.values() for x, _ in v]
    ys = [y for v in pts.values() for _, y in v]
    if not xs:
        raise ValueError("nothing to plot")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x0 == x1:
        x0, x1 = x0 - 1, x1 + 1
    if y0 == y1:
        y0, y1 = y0 - 1, y1 + 1
    pw = WIDTH - LEFT - RIGHT
    ph = HEIGHT - TOP - BOTTOM

    def sx(x):
        return LEFT + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return TOP + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        X = sx(t)
        out.append(f'<line x1="{_fmt(X)}" y1="{TOP + ph}" x2="{_fmt(X)}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(X)}" y="{TOP + ph + 19}" text-anchor="middle">{_label(t)}</text>')
    for t in _ticks(y0, y1):
        Y = sy(t)
        lab = f"1e{t:g}" if log_y else _label(t)
        out.append(f'<line x1="{LEFT - 5}" y1="{_fmt(Y)}" x2="{LEFT}" y2="{_fmt(Y)}" stroke="black"/>')
        out.append(f'<line x1="{LEFT}" y1="{_fmt(Y)}" x2="{LEFT + pw}" y2="{_fmt(Y)}" stroke="#dddddd"/>')
        out.append(f'<text x="{LEFT - 8}" y="{_fmt(Y + 4)}" text-anchor="end">{lab}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(
        f'<text x="18" y="{TOP + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {TOP + ph / 2:.1f})">{escape(ylabel)}</text>'
    )
    for i, (name, data) in enumerate(pts.items()):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in data)
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}">'
            f"<title>{escape(name)}</title></polyline>"
        )
        ly = TOP + 10 + 18 * i
        lx = LEFT + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
