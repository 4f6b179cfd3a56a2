"""Small deterministic SVG line charts.

No plotting library is used on purpose: the output must be byte-identical
across runs, so everything here is plain string building with fixed
formatting. Charts are landscape 640x400 with a legend in the top right.
"""

from __future__ import annotations

import math
from typing import Sequence

Series = tuple[str, Sequence[float], Sequence[float]]

_WIDTH = 640
_HEIGHT = 400
_MARGIN_LEFT = 70
_MARGIN_RIGHT = 20
_MARGIN_TOP = 40
_MARGIN_BOTTOM = 50
_PALETTE = ("#1b6ca8", "#d1495b", "#3a7d44", "#8d6a9f", "#c77d1e")


def _axis_range(values: list[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        pad = abs(lo) * 0.1 or 1.0
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _fmt_coord(v: float) -> str:
    return f"{v:.2f}"


def _fmt_tick(v: float) -> str:
    return f"{v:.4g}"


def line_chart(title: str, x_label: str, y_label: str,
               series: Sequence[Series], log_y: bool = False) -> str:
    """Render one or more (label, xs, ys) series as an SVG document.

    With ``log_y`` the vertical axis shows base-10 decades; it requires all
    y values to be positive and falls back to a linear axis otherwise.
    """
    if not series:
        raise ValueError("need at least one series")
    for label, xs, ys in series:
        if len(xs) != len(ys):
            raise ValueError(f"series {label!r} has mismatched x/y lengths")
        if not xs:
            raise ValueError(f"series {label!r} is empty")

    all_x = [float(x) for _, xs, _ in series for x in xs]
    all_y = [float(y) for _, _, ys in series for y in ys]
    use_log = log_y and all(y > 0 for y in all_y)
    if use_log:
        all_y = [math.log10(y) for y in all_y]
    x_lo, x_hi = _axis_range(all_x)
    y_lo, y_hi = _axis_range(all_y)

    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def px(x: float) -> float:
        return _MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return _MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>',
        f'<text x="{_WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
    ]

    # Axes and grid lines, vertical axis first.
    for tick in _ticks(y_lo, y_hi):
        y = py(tick)
        label = _fmt_tick(10 ** tick if use_log else tick)
        parts.append(
            f'<line x1="{_MARGIN_LEFT}" y1="{_fmt_coord(y)}" '
            f'x2="{_WIDTH - _MARGIN_RIGHT}" y2="{_fmt_coord(y)}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_LEFT - 6}" y="{_fmt_coord(y + 4)}" '
            f'text-anchor="end" font-family="sans-serif" font-size="11">'
            f'{label}</text>'
        )
    for tick in _ticks(x_lo, x_hi):
        x = px(tick)
        parts.append(
            f'<text x="{_fmt_coord(x)}" y="{_HEIGHT - _MARGIN_BOTTOM + 18}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="11">'
            f'{_fmt_tick(tick)}</text>'
        )
    parts.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" '
        f'y2="{_HEIGHT - _MARGIN_BOTTOM}" stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{_HEIGHT - _MARGIN_BOTTOM}" '
        f'x2="{_WIDTH - _MARGIN_RIGHT}" y2="{_HEIGHT - _MARGIN_BOTTOM}" '
        f'stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{_MARGIN_LEFT + plot_w // 2}" y="{_HEIGHT - 12}" '
        f'text-anchor="middle" font-family="sans-serif" font-size="12">'
        f'{x_label}</text>'
    )
    parts.append(
        f'<text x="18" y="{_MARGIN_TOP + plot_h // 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {_MARGIN_TOP + plot_h // 2})">{y_label}</text>'
    )

    for idx, (label, xs, ys) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        points = []
        for x, y in zip(xs, ys):
            yy = math.log10(float(y)) if use_log else float(y)
            points.append(f"{_fmt_coord(px(float(x)))},{_fmt_coord(py(yy))}")
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{" ".join(points)}"/>'
        )
        if len(points) == 1:
            x0, y0 = points[0].split(",")
            parts.append(f'<circle cx="{x0}" cy="{y0}" r="3" fill="{color}"/>')
        legend_y = _MARGIN_TOP + 14 * idx
        parts.append(
            f'<line x1="{_WIDTH - 150}" y1="{legend_y}" x2="{_WIDTH - 130}" '
            f'y2="{legend_y}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_WIDTH - 124}" y="{legend_y + 4}" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
