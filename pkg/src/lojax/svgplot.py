"""Tiny deterministic SVG emitter for scatter plots with reference lines."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

__all__ = ["scatter_svg"]

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((k * mag for k in (1, 2, 5, 10) if k * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-12 * step:
        out.append(round(v, 10))
        v += step
    return out


def scatter_svg(
    series: Sequence[tuple],
    lines: Sequence[tuple] = (),
    *,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 640,
    height: int = 480,
) -> str:
    """Render point series and straight lines as an SVG document.

    ``series`` holds ``(label, xs, ys)`` triples; ``lines`` holds
    ``(label, slope, intercept)`` triples drawn across the data range.
    Non-finite points are dropped.
    """
    pts = []
    for label, xs, ys in series:
        clean = [(float(x), float(y)) for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)]
        pts.append((label, clean))
    allx = [x for _, c in pts for x, _ in c]
    ally = [y for _, c in pts for _, y in c]
    if not allx:
        allx, ally = [0.0, 1.0], [0.0, 1.0]
    x0, x1 = min(allx), max(allx)
    y0, y1 = min(ally), max(ally)
    for _, slope, icept in lines:
        for x in (x0, x1):
            y = slope * x + icept
            if math.isfinite(y):
                y0, y1 = min(y0, y), max(y1, y)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    ml, mr, mt, mb = 70, 20, 40, 55
    pw, ph = width - ml - mr, height - mt - mb

    def sx(x):
        return ml + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return mt + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        X = sx(t)
        out.append(f'<line x1="{_fmt(X)}" y1="{mt + ph}" x2="{_fmt(X)}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_fmt(X)}" y="{mt + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        Y = sy(t)
        out.append(f'<line x1="{ml - 5}" y1="{_fmt(Y)}" x2="{ml}" y2="{_fmt(Y)}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{_fmt(Y + 4)}" text-anchor="end">{t:g}</text>')
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(
            f'<text x="16" y="{mt + ph / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 16 {mt + ph / 2:.1f})">{escape(ylabel)}</text>'
        )
    out.append(f'<clipPath id="plot"><rect x="{ml}" y="{mt}" width="{pw}" height="{ph}"/></clipPath>')
    legend = []
    for k, (label, clean) in enumerate(pts):
        color = _PALETTE[k % len(_PALETTE)]
        out.append(f'<g fill="{color}" fill-opacity="0.6" clip-path="url(#plot)">')
        for x, y in clean:
            out.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="1.6"/>')
        out.append("</g>")
        if label:
            legend.append((label, color, False))
    for label, slope, icept in lines:
        ya, yb = slope * x0 + icept, slope * x1 + icept
        out.append(
            f'<line x1="{_fmt(sx(x0))}" y1="{_fmt(sy(ya))}" x2="{_fmt(sx(x1))}" y2="{_fmt(sy(yb))}" '
            'stroke="black" stroke-dasharray="6 4" clip-path="url(#plot)"/>'
        )
        if label:
            legend.append((label, "black", True))
    for k, (label, color, dashed) in enumerate(legend):
        y = mt + 14 + 16 * k
        if dashed:
            out.append(f'<line x1="{ml + 10}" y1="{y - 4}" x2="{ml + 30}" y2="{y - 4}" stroke="black" stroke-dasharray="6 4"/>')
        else:
            out.append(f'<circle cx="{ml + 20}" cy="{y - 4}" r="3" fill="{color}"/>')
        out.append(f'<text x="{ml + 36}" y="{y}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
