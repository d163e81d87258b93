"""Minimal static SVG line charts."""
from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 30, 50, 70
MAX_POINTS = 2001
PALETTE = ("#c0392b", "#2471a3", "#229954", "#7d3c98")


@dataclass(frozen=True)
class Series:
    label: str
    x: list[float]
    y: list[float]


def _nice_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-9 * step:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return f"{v:g}"


def _thin(xs, ys):
    n = len(xs)
    if n <= MAX_POINTS:
        return list(xs), list(ys)
    stride = math.ceil((n - 1) / (MAX_POINTS - 1))
    idx = list(range(0, n, stride))
    if idx[-1] != n - 1:
        idx.append(n - 1)
    return [xs[k] for k in idx], [ys[k] for k in idx]


def line_chart(series: list[Series], title: str, xlabel: str, ylabel: str) -> str:
    """Render ``series`` as polylines on shared axes; returns the SVG text."""
    xs = [v for s in series for v in s.x]
    ys = [v for s in series for v in s.y]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad = 0.05 * (y1 - y0) if y1 > y0 else max(abs(y0), 1.0) * 0.05
    y0, y1 = y0 - pad, y1 + pad
    if x1 == x0:
        x1 = x0 + 1.0
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN_T + (y1 - y) / (y1 - y0) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="28" text-anchor="middle" font-family="sans-serif" font-size="18">{escape(title)}</text>',
        '<g class="axes" stroke="black" stroke-width="1">',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T + ph}" x2="{MARGIN_L + pw}" y2="{MARGIN_T + ph}"/>',
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" y2="{MARGIN_T + ph}"/>',
        "</g>",
        '<g class="ticks" font-family="sans-serif" font-size="12">',
    ]
    for t in _nice_ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{_fmt(X)}" y1="{MARGIN_T + ph}" x2="{_fmt(X)}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(X)}" y="{MARGIN_T + ph + 20}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in _nice_ticks(y0, y1):
        Y = py(t)
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{_fmt(Y)}" x2="{MARGIN_L}" y2="{_fmt(Y)}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{_fmt(Y + 4)}" text-anchor="end">{_tick_label(t)}</text>')
    out.append("</g>")
    out.append(
        f'<text x="{MARGIN_L + pw / 2:.0f}" y="{HEIGHT - 20}" text-anchor="middle" font-family="sans-serif" font-size="14">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="20" y="{MARGIN_T + ph / 2:.0f}" text-anchor="middle" font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 20 {MARGIN_T + ph / 2:.0f})">{escape(ylabel)}</text>'
    )
    for k, s in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        tx, ty = _thin(s.x, s.y)
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(tx, ty))
        out.append(f'<polyline class="series" data-label="{escape(s.label)}" fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        ly = MARGIN_T + 15 + 20 * k
        lx = MARGIN_L + pw - 170
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 30}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 38}" y="{ly + 4}" font-family="sans-serif" font-size="13">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
