"""SVG 1.1 drawings of arrangements.

Lines are clipped exactly to the viewport and written with 30 significant
digits; crossings of three or more lines get a dot whose radius grows with
the multiplicity.
"""

from __future__ import annotations

from fractions import Fraction

from .census import crossing_points
from .constructions import Arrangement
from .exactnum import Quad
from .geometry import intersect

__all__ = ["render_svg", "RenderError", "MAX_LINES", "default_viewport"]

MAX_LINES = 600
DIGITS = 30

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
)


class RenderError(ValueError):
    pass


def _num(q: Quad) -> str:
    d = q.to_decimal(DIGITS)
    s = format(d, "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def default_viewport(arr: Arrangement, pad=Fraction(1, 10)) -> tuple:
    """Bounding box of all strip-boundary crossings, padded on every side."""
    spec = arr.spec
    rows = [spec.boundary_line(r) for r in range(1, 2 * spec.k + 1)]
    xs, ys = [], []
    for i, l1 in enumerate(rows):
        for l2 in rows[i + 1 :]:
            p = intersect(l1, l2)
            if p is not None:
                xs.append(p.x)
                ys.append(p.y)
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    dx, dy = (x1 - x0) * pad, (y1 - y0) * pad
    return (x0 - dx, y0 - dy, x1 + dx, y1 + dy)


def _clip(line, box):
    x0, y0, x1, y1 = box
    pts = []
    if line.beta:
        for x in (x0, x1):
            y = -(line.alpha * x + line.gamma) / line.beta
            if y0 <= y <= y1:
                pts.append((x, y))
    if line.alpha:
        for y in (y0, y1):
            x = -(line.beta * y + line.gamma) / line.alpha
            if x0 <= x <= x1:
                pts.append((x, y))
    if len(pts) < 2:
        return None
    pts.sort(key=lambda p: (p[0], p[1]))
    return pts[0], pts[-1]


def render_svg(arr: Arrangement, viewport=None, markers: bool = True, size: int = 800) -> str:
    """SVG document with one path per line, coloured by bundle."""
    if len(arr.lines) > MAX_LINES:
        raise RenderError(f"refusing to draw {len(arr.lines)} lines; the limit is {MAX_LINES}")
    box = viewport or default_viewport(arr)
    x0, y0, x1, y1 = (v if isinstance(v, Quad) else Quad(Fraction(v)) for v in box)
    w, h = x1 - x0, y1 - y0
    stroke = w / (size * 2)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" '
        f'viewBox="{_num(x0)} {_num(-y1)} {_num(w)} {_num(h)}">',
        f"<title>{arr.name}, m = {arr.m}</title>",
        '<g transform="scale(1,-1)" fill="none">',
    ]
    for line in arr.lines:
        seg = _clip(line, (x0, y0, x1, y1))
        if seg is None:
            continue
        (ax, ay), (bx, by) = seg
        color = PALETTE[(line.bundle - 1) % len(PALETTE)]
        out.append(
            f'<path class="L{line.bundle}" d="M {_num(ax)} {_num(ay)} L {_num(bx)} {_num(by)}" '
            f'stroke="{color}" stroke-width="{_num(stroke)}"/>'
        )
    if markers:
        for p, mult in crossing_points(arr, 3):
            if x0 <= p.x <= x1 and y0 <= p.y <= y1:
                r = w * mult / (size * 4)
                out.append(
                    f'<circle class="mult{mult}" cx="{_num(p.x)}" cy="{_num(p.y)}" r="{_num(r)}" '
                    'fill="#000000" fill-opacity="0.6"/>'
                )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
