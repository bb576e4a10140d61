"""Minimal static SVG rendering of the figure CSV files."""

import math
from xml.sax.saxutils import escape

import numpy as np

from .experiments import read_csv

WIDTH, HEIGHT = 640, 420
MARGIN = 60
COLORS = {"err": "#1f77b4", "bound": "#d62728", "boundsharp": "#2ca02c"}


def _svg(body, title):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">\n'
        f'<rect width="100%" height="100%" fill="white"/>\n'
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14">{escape(title)}</text>\n'
        + "\n".join(body)
        + "\n</svg>\n"
    )


def _axes(xlabel, ylabel):
    x0, y0, x1, y1 = MARGIN, HEIGHT - MARGIN, WIDTH - 20, 40
    return [
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text x="{(x0 + x1) / 2}" y="{HEIGHT - 20}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{escape(xlabel)}</text>',
        f'<text x="16" y="{(y0 + y1) / 2}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12" transform="rotate(-90 16 {(y0 + y1) / 2})">{escape(ylabel)}</text>',
    ]


def render_residual_svg(csv_path, svg_path):
    """Log-scale plot of every column against ``n``; ``err`` as points, bounds as lines."""
    meta, columns, data = read_csv(csv_path)
    x = data[:, 0]
    positive = data[:, 1:][data[:, 1:] > 0]
    lo = math.floor(math.log10(positive.min())) if positive.size else -16
    hi = math.ceil(math.log10(positive.max())) if positive.size else 0
    hi = max(hi, lo + 1)
    xmin, xmax = x.min(), max(x.max(), x.min() + 1)

    def px(v):
        return MARGIN + (v - xmin) / (xmax - xmin) * (WIDTH - 20 - MARGIN)

    def py(v):
        return HEIGHT - MARGIN - (math.log10(v) - lo) / (hi - lo) * (HEIGHT - MARGIN - 40)

    body = _axes("n", "residual")
    for e in range(lo, hi + 1):
        body.append(
            f'<text x="{MARGIN - 6}" y="{py(10.0**e) + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">1e{e}</text>'
        )
    for k, name in enumerate(columns[1:], start=1):
        color = COLORS.get(name, "black")
        y = data[:, k]
        keep = y > 0
        pts = [(px(a), py(b)) for a, b in zip(x[keep], y[keep])]
        if name == "err":
            body.extend(f'<circle cx="{a:.1f}" cy="{b:.1f}" r="1.5" fill="{color}"/>' for a, b in pts)
        elif pts:
            path = " ".join(f"{a:.1f},{b:.1f}" for a, b in pts)
            body.append(f'<polyline points="{path}" fill="none" stroke="{color}"/>')
        body.append(
            f'<text x="{WIDTH - 110}" y="{50 + 14 * k}" fill="{color}" font-family="sans-serif" '
            f'font-size="11">{escape(name)}</text>'
        )
    title = f"{meta.get('kind', '')} n={meta.get('n', '')}"
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(_svg(body, title))


def render_jordan_svg(csv_path, svg_path):
    """Eigenvalues in the complex plane with the reference circle."""
    meta, _, data = read_csv(csv_path)
    radius = float(meta.get("radius", 1.0))
    extent = max(np.abs(data).max() if data.size else 0.0, radius) * 1.1
    side = min(WIDTH, HEIGHT) - 2 * MARGIN
    cx, cy = WIDTH / 2, HEIGHT / 2 + 10
    scale = side / (2 * extent)
    body = [
        f'<circle cx="{cx}" cy="{cy}" r="{radius * scale:.1f}" fill="none" stroke="#d62728"/>',
        f'<line x1="{cx - side / 2}" y1="{cy}" x2="{cx + side / 2}" y2="{cy}" stroke="#999"/>',
        f'<line x1="{cx}" y1="{cy - side / 2}" x2="{cx}" y2="{cy + side / 2}" stroke="#999"/>',
    ]
    body.extend(
        f'<circle cx="{cx + re * scale:.1f}" cy="{cy - im * scale:.1f}" r="2" fill="#1f77b4"/>'
        for re, im in data
    )
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(_svg(body, f"eigenvalues, radius {radius:.4f}"))


def render_csv(csv_path, svg_path):
    _, columns, _ = read_csv(csv_path)
    if columns == ("real", "imag"):
        render_jordan_svg(csv_path, svg_path)
    else:
        render_residual_svg(csv_path, svg_path)
