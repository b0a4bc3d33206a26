"""SVG rendering of planar instances and witnesses."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .model import Instance, TverbergWitness

CLASS_COLORS = (
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
FACE_COLORS = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860")
SIZE = 480
MARGIN = 40


def convex_hull(points):
    """Monotone chain on exact coordinates; counter-clockwise, no repeats."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def render_svg(instance: Instance, witness: TverbergWitness | None = None) -> str:
    if instance.d != 2:
        raise ValueError("plot requires d=2")
    pts = list(instance.points)
    xs = [p[0] for p in pts] + ([witness.point[0]] if witness else [])
    ys = [p[1] for p in pts] + ([witness.point[1]] if witness else [])
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y) or Fraction(1)
    scale = Fraction(SIZE - 2 * MARGIN) / span

    def xy(p):
        # y axis points up in the picture
        x = MARGIN + (p[0] - lo_x) * scale
        y = SIZE - MARGIN - (p[1] - lo_y) * scale
        return f"{float(x):.3f}", f"{float(y):.3f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    if witness is not None:
        for i, face in enumerate(witness.faces):
            color = FACE_COLORS[i % len(FACE_COLORS)]
            hull = convex_hull([pts[v] for v in face])
            coords = [xy(p) for p in hull]
            label = escape(f"face {i}: {list(face)}")
            if len(coords) >= 3:
                path = " ".join(f"{x},{y}" for x, y in coords)
                out.append(
                    f'<polygon class="face" points="{path}" fill="{color}" fill-opacity="0.25" '
                    f'stroke="{color}" stroke-width="2"><title>{label}</title></polygon>'
                )
            elif len(coords) == 2:
                (x1, y1), (x2, y2) = coords
                out.append(
                    f'<line class="face" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" '
                    f'stroke-width="3" stroke-opacity="0.6"><title>{label}</title></line>'
                )
            else:
                x, y = coords[0]
                out.append(
                    f'<circle class="face" cx="{x}" cy="{y}" r="9" fill="none" stroke="{color}" '
                    f'stroke-width="2"><title>{label}</title></circle>'
                )
    for v, p in enumerate(pts):
        x, y = xy(p)
        c = instance.coloring.class_of[v]
        color = CLASS_COLORS[c % len(CLASS_COLORS)]
        out.append(
            f'<circle class="vertex" cx="{x}" cy="{y}" r="5" fill="{color}">'
            f"<title>v{v} class {c} ({p[0]}, {p[1]})</title></circle>"
        )
        out.append(f'<text x="{float(x) + 7:.3f}" y="{float(y) - 7:.3f}" font-size="12">{v}</text>')
    if witness is not None:
        x, y = xy(witness.point)
        fx, fy = float(x), float(y)
        out.append(
            f'<path class="common-point" d="M {fx - 7:.3f} {fy - 7:.3f} L {fx + 7:.3f} {fy + 7:.3f} '
            f'M {fx - 7:.3f} {fy + 7:.3f} L {fx + 7:.3f} {fy - 7:.3f}" stroke="black" stroke-width="2">'
            f"<title>common point ({witness.point[0]}, {witness.point[1]})</title></path>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
