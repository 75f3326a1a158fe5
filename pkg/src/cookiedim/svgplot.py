"""Minimal SVG line plots for sweep output."""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 720, 440
MARGIN = (60, 20, 30, 50)  # left, right, top, bottom
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = 10 ** math.floor(math.log10((hi - lo) / n))
    for m in (1, 2, 5, 10):
        if (hi - lo) / (m * step) <= n:
            step *= m
            break
    start = math.ceil(lo / step) * step
    return list(np.arange(start, hi + step * 1e-9, step))


def _polyline(xs, ys, sx, sy, **attrs) -> list[str]:
    """One polyline per finite run of points."""
    out, run = [], []
    extra = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
    for x, y in list(zip(xs, ys)) + [(math.nan, math.nan)]:
        if np.isfinite(x) and np.isfinite(y):
            run.append(f"{sx(x):.2f},{sy(y):.2f}")
        elif run:
            out.append(f'<polyline fill="none" {extra} points="{" ".join(run)}"/>')
            run = []
    return out


def line_plot(
    path: str,
    x: Sequence[float],
    curves: Sequence[tuple[str, Sequence[float]]],
    min_envelope: Sequence[float] | None = None,
    max_envelope: Sequence[float] | None = None,
    kinks: Sequence[tuple[float, float]] = (),
    title: str = "",
    xlabel: str = "a",
    ylabel: str = "dimension",
) -> None:
    """Thin constituent curves, thick envelopes, kinks as circles."""
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(y, dtype=float) for _, y in curves]
    finite = np.concatenate([y[np.isfinite(y)] for y in ys] + [np.array([0.0, 1.0])])
    y_lo, y_hi = float(finite.min()), float(finite.max())
    pad = 0.05 * (y_hi - y_lo or 1.0)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    x_lo, x_hi = float(x.min()), float(x.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    left, right, top, bottom = MARGIN
    pw, ph = WIDTH - left - right, HEIGHT - top - bottom

    def sx(v):
        return left + (v - x_lo) / (x_hi - x_lo) * pw

    def sy(v):
        return top + (y_hi - v) / (y_hi - y_lo) * ph

    el = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="white" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        el.append(f'<line x1="{sx(t):.2f}" y1="{top + ph}" x2="{sx(t):.2f}" y2="{top + ph + 4}" stroke="black"/>')
        el.append(f'<text x="{sx(t):.2f}" y="{top + ph + 16}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y_lo, y_hi):
        el.append(f'<line x1="{left - 4}" y1="{sy(t):.2f}" x2="{left}" y2="{sy(t):.2f}" stroke="black"/>')
        el.append(f'<text x="{left - 6}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    el.append(f'<text x="{left + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    el.append(
        f'<text x="14" y="{top + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 14 {top + ph / 2})">{escape(ylabel)}</text>'
    )
    if title:
        el.append(f'<text x="{left + pw / 2}" y="{top - 10}" text-anchor="middle">{escape(title)}</text>')
    for j, ((label, _), y) in enumerate(zip(curves, ys)):
        color = PALETTE[j % len(PALETTE)]
        el += _polyline(x, y, sx, sy, stroke=color, stroke_width=1)
        el.append(f'<text x="{left + 8}" y="{top + 14 + 13 * j}" fill="{color}">{escape(label)}</text>')
    for env, color in ((min_envelope, "black"), (max_envelope, "#d62728")):
        if env is not None:
            el += _polyline(x, env, sx, sy, stroke=color, stroke_width=3, stroke_opacity=0.6)
    for a, v in kinks:
        el.append(f'<circle cx="{sx(a):.2f}" cy="{sy(v):.2f}" r="5" fill="none" stroke="black" stroke-width="1.5"/>')
    el.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(el) + "\n")
