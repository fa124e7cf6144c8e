"""Minimal SVG scatter plots with a fitted regression line."""

from __future__ import annotations

import math
from collections.abc import Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 440
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 20, 40, 60


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + step * 1e-9:
        ticks.append(round(t, 10))
        t += step
    return ticks


def _padded(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        lo, hi = lo - 1, hi + 1
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def scatter_svg(
    xs: Sequence[float],
    ys: Sequence[float],
    *,
    labels: Sequence[str] | None = None,
    slope: float | None = None,
    intercept: float | None = None,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> str:
    if len(xs) != len(ys) or not xs:
        raise ValueError("need equally long, non-empty x and y")
    x0, x1 = _padded(xs)
    y0, y1 = _padded(ys)
    pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(x: float) -> float:
        return MARGIN_LEFT + (x - x0) / (x1 - x0) * pw

    def sy(y: float) -> float:
        return MARGIN_TOP + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<g class="axes" stroke="black" stroke-width="1">'
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP + ph}" x2="{MARGIN_LEFT + pw}" y2="{MARGIN_TOP + ph}"/>'
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{MARGIN_TOP + ph}"/></g>',
    ]
    ticks = ['<g class="ticks">']
    for t in _nice_ticks(x0, x1):
        px = sx(t)
        ticks.append(f'<line x1="{px:.2f}" y1="{MARGIN_TOP + ph}" x2="{px:.2f}" y2="{MARGIN_TOP + ph + 5}" stroke="black"/>')
        ticks.append(f'<text x="{px:.2f}" y="{MARGIN_TOP + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y0, y1):
        py = sy(t)
        ticks.append(f'<line x1="{MARGIN_LEFT - 5}" y1="{py:.2f}" x2="{MARGIN_LEFT}" y2="{py:.2f}" stroke="black"/>')
        ticks.append(f'<text x="{MARGIN_LEFT - 8}" y="{py + 4:.2f}" text-anchor="end">{t:g}</text>')
    ticks.append("</g>")
    out.extend(ticks)
    out.append(
        f'<text x="{MARGIN_LEFT + pw / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="18" y="{MARGIN_TOP + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_TOP + ph / 2:.1f})">{escape(ylabel)}</text>'
    )
    if slope is not None and intercept is not None:
        lx0, lx1 = min(xs), max(xs)
        out.append(
            f'<line class="fit" x1="{sx(lx0):.2f}" y1="{sy(slope * lx0 + intercept):.2f}" '
            f'x2="{sx(lx1):.2f}" y2="{sy(slope * lx1 + intercept):.2f}" stroke="#c0392b" stroke-width="1.5"/>'
        )
    out.append('<g class="points" fill="#2c7fb8">')
    for i, (x, y) in enumerate(zip(xs, ys)):
        label = escape(labels[i]) if labels else ""
        out.append(f'<circle class="point" cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4"><title>{label}</title></circle>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
