"""Tiny SVG emitter for work-versus-efficiency curves."""
from __future__ import annotations

from xml.sax.saxutils import escape

WIDTH, HEIGHT, MARGIN = 480, 360, 50


def _scale(values, lo_px, hi_px):
    lo, hi = min(values), max(values)
    span = hi - lo or 1.0
    return [lo_px + (v - lo) / span * (hi_px - lo_px) for v in values]


def tradeoff_svg(points, title="", xlabel="efficiency", ylabel="work per cycle") -> str:
    """Polyline plus markers through ``(x, y)`` points, in the given order."""
    points = list(points)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle" '
        f'font-size="12">{escape(xlabel)}</text>',
        f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {HEIGHT / 2})">{escape(ylabel)}</text>',
    ]
    if title:
        parts.append(f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" '
                     f'font-size="14">{escape(title)}</text>')
    if points:
        xs = _scale([p[0] for p in points], MARGIN, WIDTH - MARGIN)
        ys = _scale([p[1] for p in points], HEIGHT - MARGIN, MARGIN)
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{coords}" fill="none" stroke="steelblue"/>')
        parts.extend(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="steelblue"/>'
                     for x, y in zip(xs, ys))
        for value, x, anchor in ((min(p[0] for p in points), MARGIN, "start"),
                                 (max(p[0] for p in points), WIDTH - MARGIN, "end")):
            parts.append(f'<text x="{x}" y="{HEIGHT - MARGIN + 14}" text-anchor="{anchor}" '
                         f'font-size="10">{value:.4g}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
