"""Minimal static SVG 1.1 line charts (no plotting dependency)."""

from __future__ import annotations

import math

__all__ = ["svg_line_chart"]

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 20, 30, 50


def _transform(vals, lo, hi, out_lo, out_hi, log):
    if log:
        vals = [math.log10(v) for v in vals]
        lo, hi = math.log10(lo), math.log10(hi)
    span = hi - lo or 1.0
    return [out_lo + (v - lo) / span * (out_hi - out_lo) for v in vals]


def _ticks(lo, hi, log):
    if log:
        first = math.ceil(math.log10(lo))
        last = math.floor(math.log10(hi))
        return [10.0 ** k for k in range(first, last + 1)] or [lo, hi]
    step = 10.0 ** math.floor(math.log10(hi - lo or 1.0))
    if (hi - lo) / step < 3:
        step /= 2
    t = math.ceil(lo / step) * step
    out = []
    while t <= hi + 1e-12 * step:
        out.append(t)
        t += step
    return out or [lo, hi]


def _fmt(v):
    return f"{v:.3g}"


def svg_line_chart(path, x, y, *, log_x=False, log_y=False, title="",
                   x_label="", y_label="") -> None:
    """Write a single-polyline chart; nonpositive values under a log axis
    are clamped to a small floor rather than dropped."""
    xs = [float(v) for v in x]
    ys = [float(v) for v in y]
    if log_x:
        floor = min((v for v in xs if v > 0), default=1e-16) * 0.1
        xs = [max(v, floor) for v in xs]
    if log_y:
        floor = min((v for v in ys if v > 0), default=1e-16) * 0.1
        ys = [max(v, floor) for v in ys]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_lo == x_hi:
        x_lo, x_hi = x_lo * 0.9 or -1, x_hi * 1.1 or 1
    if y_lo == y_hi:
        y_lo, y_hi = y_lo * 0.9 or -1, y_hi * 1.1 or 1
    px = _transform(xs, x_lo, x_hi, _ML, _W - _MR, log_x)
    py = _transform(ys, y_lo, y_hi, _H - _MB, _MT, log_y)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.0f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" '
        'stroke="black"/>',
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi, log_x):
        (tx,) = _transform([t], x_lo, x_hi, _ML, _W - _MR, log_x)
        parts.append(f'<line x1="{tx:.2f}" y1="{_H - _MB}" x2="{tx:.2f}" '
                     f'y2="{_H - _MB + 5}" stroke="black"/>')
        parts.append(f'<text x="{tx:.2f}" y="{_H - _MB + 18}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>')
    for t in _ticks(y_lo, y_hi, log_y):
        (ty,) = _transform([t], y_lo, y_hi, _H - _MB, _MT, log_y)
        parts.append(f'<line x1="{_ML - 5}" y1="{ty:.2f}" x2="{_ML}" y2="{ty:.2f}" '
                     'stroke="black"/>')
        parts.append(f'<text x="{_ML - 8}" y="{ty + 4:.2f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11">{_fmt(t)}</text>')
    parts.append(f'<text x="{_W / 2:.0f}" y="{_H - 12}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="12">{x_label}</text>')
    parts.append(f'<text x="16" y="{_H / 2:.0f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="12" '
                 f'transform="rotate(-90 16 {_H / 2:.0f})">{y_label}</text>')
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#1f6fb2" '
                 'stroke-width="1.5"/>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
