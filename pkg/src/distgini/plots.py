"""Minimal hand-written SVG line plots and heatmaps.

Output is plain text with fixed number formatting, so identical data gives
byte-identical files.
"""

from __future__ import annotations

import math
from typing import Sequence

__all__ = ["line_plot", "heatmap"]

W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _f(x: float) -> str:
    return f"{x:.2f}"


def _head(title):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W // 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{_escape(title)}</text>',
    ]


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _axes(xlo, xhi, ylo, yhi, xlabel, ylabel, sx, sy):
    out = [
        f'<line x1="{LEFT}" y1="{H - BOTTOM}" x2="{W - RIGHT}" y2="{H - BOTTOM}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{H - BOTTOM}" stroke="black"/>',
    ]
    for i in range(6):
        xv = xlo + (xhi - xlo) * i / 5
        yv = ylo + (yhi - ylo) * i / 5
        px, py = sx(xv), sy(yv)
        out.append(f'<text x="{_f(px)}" y="{H - BOTTOM + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{xv:.3g}</text>')
        out.append(f'<text x="{LEFT - 6}" y="{_f(py + 4)}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{yv:.3g}</text>')
    out.append(f'<text x="{(LEFT + W - RIGHT) // 2}" y="{H - 12}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13">{_escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{(TOP + H - BOTTOM) // 2}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="13" transform="rotate(-90 16 {(TOP + H - BOTTOM) // 2})">{_escape(ylabel)}</text>')
    return out


def _span(values):
    finite = [v for v in values if math.isfinite(v)]
    lo, hi = (min(finite), max(finite)) if finite else (0.0, 1.0)
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def line_plot(series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
              title: str, xlabel: str = "alpha", ylabel: str = "value") -> str:
    """``series`` is a list of ``(label, xs, ys)``."""
    xlo, xhi = _span([x for _, xs, _ in series for x in xs])
    ylo, yhi = _span([y for _, _, ys in series for y in ys])

    def sx(x):
        return LEFT + (x - xlo) / (xhi - xlo) * (W - LEFT - RIGHT)

    def sy(y):
        return H - BOTTOM - (y - ylo) / (yhi - ylo) * (H - TOP - BOTTOM)

    out = _head(title) + _axes(xlo, xhi, ylo, yhi, xlabel, ylabel, sx, sy)
    for k, (label, xs, ys) in enumerate(series):
        color = COLORS[k % len(COLORS)]
        pts = " ".join(f"{_f(sx(x))},{_f(sy(y))}" for x, y in zip(xs, ys) if math.isfinite(y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{W - RIGHT - 8}" y="{TOP + 16 * (k + 1)}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="12" fill="{color}">{_escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _color(t: float) -> str:
    # blue -> white -> red
    t = min(max(t, 0.0), 1.0)
    if t < 0.5:
        s = t / 0.5
        r, g, b = int(40 + 215 * s), int(80 + 175 * s), 255
    else:
        s = (t - 0.5) / 0.5
        r, g, b = 255, int(255 - 200 * s), int(255 - 215 * s)
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap(thetas: Sequence[float], alphas: Sequence[float], values, title: str,
            xlabel: str = "alpha", ylabel: str = "theta") -> str:
    """``values[i][j]`` is the value at ``(thetas[i], alphas[j])``."""
    flat = [v for row in values for v in row]
    vlo, vhi = _span(flat)
    xlo, xhi = _span(alphas)
    ylo, yhi = _span(thetas)

    def sx(x):
        return LEFT + (x - xlo) / (xhi - xlo) * (W - LEFT - RIGHT)

    def sy(y):
        return H - BOTTOM - (y - ylo) / (yhi - ylo) * (H - TOP - BOTTOM)

    out = _head(f"{title} [{vlo:.4g}, {vhi:.4g}]")
    cw = (W - LEFT - RIGHT) / max(len(alphas), 1)
    ch = (H - TOP - BOTTOM) / max(len(thetas), 1)
    for i, t in enumerate(thetas):
        y = H - BOTTOM - (i + 1) * ch
        for j, a in enumerate(alphas):
            v = values[i][j]
            fill = _color((v - vlo) / (vhi - vlo)) if math.isfinite(v) else "#888888"
            out.append(f'<rect x="{_f(LEFT + j * cw)}" y="{_f(y)}" width="{_f(cw + 0.3)}" '
                       f'height="{_f(ch + 0.3)}" fill="{fill}"/>')
    out += _axes(xlo, xhi, ylo, yhi, xlabel, ylabel, sx, sy)
    out.append("</svg>")
    return "\n".join(out) + "\n"
