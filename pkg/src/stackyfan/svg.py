"""Static SVG rendering of rank-2 fans, polytopes and reduction strips.

Pure functions of the data: no timestamps, no random ids, byte-identical
output for identical input. Coordinates are computed in exact rational
arithmetic and only formatted to fixed-point decimals at the very end.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key

from .errors import StackyFanError
from .fan import WeightedFan
from .polytope import HPolytope, vertices
from .reduction import ReductionReport

UNIT = 40  # pixels per lattice step
PALETTE = ("#aed6f1", "#f9e79f", "#a9dfbf", "#d7bde2", "#f5b7b1",
           "#fad7a0", "#a3e4d7", "#d5dbdb")


def _num(x) -> str:
    """Fixed-point decimal with up to 3 fractional digits, exact rounding."""
    f = Fraction(x)
    scaled = f * 1000
    q = scaled.numerator // scaled.denominator
    r = scaled - q
    if 2 * r >= 1:
        q += 1
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole, frac = divmod(q, 1000)
    text = f"{sign}{whole}.{frac:03d}".rstrip("0").rstrip(".")
    return text or "0"


class _Canvas:
    """Maps math coordinates (y up) to SVG coordinates (y down)."""

    def __init__(self, xmin, xmax, ymin, ymax, unit=UNIT, pad=20):
        self.xmin, self.ymax = Fraction(xmin), Fraction(ymax)
        self.unit = Fraction(unit)
        self.pad = Fraction(pad)
        self.width = (Fraction(xmax) - Fraction(xmin)) * unit + 2 * self.pad
        self.height = (Fraction(ymax) - Fraction(ymin)) * unit + 2 * self.pad

    def pt(self, p) -> str:
        x = self.pad + (Fraction(p[0]) - self.xmin) * self.unit
        y = self.pad + (self.ymax - Fraction(p[1])) * self.unit
        return f"{_num(x)},{_num(y)}"

    def xy(self, p) -> tuple[str, str]:
        x, y = self.pt(p).split(",")
        return x, y


def _header(canvas: _Canvas) -> str:
    w, h = _num(canvas.width), _num(canvas.height)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}" font-family="monospace" font-size="12">')


def _lattice_dots(canvas: _Canvas, xmin, xmax, ymin, ymax) -> list[str]:
    out = []
    for x in range(xmin, xmax + 1):
        for y in range(ymin, ymax + 1):
            cx, cy = canvas.xy((x, y))
            out.append(f'<circle cx="{cx}" cy="{cy}" r="1.5" fill="#b0b0b0"/>')
    return out


def _axes(canvas: _Canvas, xmin, xmax, ymin, ymax) -> list[str]:
    out = []
    if xmin <= 0 <= xmax:
        top, bot = canvas.xy((0, ymax)), canvas.xy((0, ymin))
        out.append(f'<line x1="{top[0]}" y1="{top[1]}" x2="{bot[0]}" y2="{bot[1]}" '
                   f'stroke="#d0d0d0" stroke-width="1"/>')
    if ymin <= 0 <= ymax:
        left, right = canvas.xy((xmin, 0)), canvas.xy((xmax, 0))
        out.append(f'<line x1="{left[0]}" y1="{left[1]}" x2="{right[0]}" y2="{right[1]}" '
                   f'stroke="#d0d0d0" stroke-width="1"/>')
    return out


def _ccw(points):
    """Vertices of a convex polygon in counterclockwise order, exactly."""
    pts = list(points)
    if len(pts) <= 2:
        return pts
    cx = sum(Fraction(p[0]) for p in pts) / len(pts)
    cy = sum(Fraction(p[1]) for p in pts) / len(pts)

    def half(p):
        dx, dy = Fraction(p[0]) - cx, Fraction(p[1]) - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cmp(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        px, py = Fraction(p[0]) - cx, Fraction(p[1]) - cy
        qx, qy = Fraction(q[0]) - cx, Fraction(q[1]) - cy
        cross = px * qy - py * qx
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(pts, key=cmp_to_key(cmp))


def render_fan(fan: WeightedFan) -> str:
    if fan.rank != 2:
        raise StackyFanError("SVG rendering needs a rank-2 fan")
    r = max((max(abs(a) for a in ray.generator) for ray in fan.rays), default=1)
    r = max(r + 1, 3)
    canvas = _Canvas(-r, r, -r, r)
    big = 8 * r
    parts = [_header(canvas)]
    for i, cone in enumerate(fan.max_cones):
        g1, g2 = fan.generators(cone)
        if g1[0] * g2[1] - g1[1] * g2[0] < 0:
            g1, g2 = g2, g1
        corners = [(0, 0), (big * g1[0], big * g1[1]),
                   (big * (g1[0] + g2[0]), big * (g1[1] + g2[1])),
                   (big * g2[0], big * g2[1])]
        pts = " ".join(canvas.pt(p) for p in corners)
        color = PALETTE[i % len(PALETTE)]
        parts.append(f'<polygon points="{pts}" fill="{color}" fill-opacity="0.55" stroke="none"/>')
    parts.append(f'<rect x="0" y="0" width="{_num(canvas.width)}" height="{_num(canvas.height)}" '
                 f'fill="none" stroke="#404040" stroke-width="1"/>')
    parts += _axes(canvas, -r, r, -r, r)
    parts += _lattice_dots(canvas, -r, r, -r, r)
    origin = canvas.pt((0, 0))
    ox, oy = origin.split(",")
    for ray in fan.rays:
        tip = canvas.pt(ray.generator)
        tx, ty = tip.split(",")
        parts.append(f'<line x1="{ox}" y1="{oy}" x2="{tx}" y2="{ty}" '
                     f'stroke="#202020" stroke-width="2"/>')
        parts.append(f'<circle cx="{tx}" cy="{ty}" r="3.5" fill="#202020"/>')
        lx, ly = canvas.xy((Fraction(ray.generator[0] * 5, 4), Fraction(ray.generator[1] * 5, 4)))
        parts.append(f'<text x="{lx}" y="{ly}" fill="#202020">{ray.weight}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _poly_window(verts, marked):
    xs = [Fraction(v[0]) for v in verts] + [Fraction(p[0]) for p in marked]
    ys = [Fraction(v[1]) for v in verts] + [Fraction(p[1]) for p in marked]
    if not xs:
        return -2, 2, -2, 2
    from .polytope import _ceil, _floor

    return (_floor(min(xs)) - 1, _ceil(max(xs)) + 1,
            _floor(min(ys)) - 1, _ceil(max(ys)) + 1)


def render_polytope(poly: HPolytope, marked=()) -> str:
    """Outline plus lattice dots; marked points (e.g. section characters)
    are drawn as filled dots. An empty polytope gives a frame with axes."""
    if poly.rank != 2:
        raise StackyFanError("SVG rendering needs a rank-2 polytope")
    verts = vertices(poly)
    xmin, xmax, ymin, ymax = _poly_window(verts, marked)
    canvas = _Canvas(xmin, xmax, ymin, ymax)
    parts = [_header(canvas)]
    parts.append(f'<rect x="0" y="0" width="{_num(canvas.width)}" height="{_num(canvas.height)}" '
                 f'fill="none" stroke="#404040" stroke-width="1"/>')
    parts += _axes(canvas, xmin, xmax, ymin, ymax)
    parts += _lattice_dots(canvas, xmin, xmax, ymin, ymax)
    if verts:
        ordered = _ccw(verts)
        pts = " ".join(canvas.pt(v) for v in ordered)
        tag = "polygon" if len(ordered) > 2 else "polyline"
        parts.append(f'<{tag} points="{pts}" fill="#aed6f1" fill-opacity="0.5" '
                     f'stroke="#1a5276" stroke-width="2"/>')
        for v in ordered:
            vx, vy = canvas.xy(v)
            parts.append(f'<circle cx="{vx}" cy="{vy}" r="3" fill="#1a5276"/>')
    for p in marked:
        px, py = canvas.xy(p)
        parts.append(f'<circle cx="{px}" cy="{py}" r="2.5" fill="#b03a2e"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_report(report: ReductionReport) -> str:
    """Strip of slice panels, one per Bohr-Sommerfeld value in ascending
    order, each with its reduced polytope outline and section count."""
    if report.p1.rank != 1:
        raise StackyFanError("SVG strips need a one-dimensional reduction")
    panel, inner, label_h = 96, 72, 30
    leaves = report.leaves
    # one global scale so slice sizes compare across panels
    extent = Fraction(1)
    boxes = []
    for leaf in leaves:
        verts = ()
        if leaf.reduced is not None and leaf.reduced.polytope.rank == 2:
            verts = vertices(leaf.reduced.polytope)
        boxes.append(verts)
        for v in verts:
            extent = max(extent, abs(Fraction(v[0])), abs(Fraction(v[1])))
    scale = Fraction(inner, 2) / extent
    width = panel * max(len(leaves), 1) + 20
    height = panel + label_h + 20
    parts = [(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
              f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">')]
    for i, leaf in enumerate(leaves):
        x0 = 10 + i * panel
        cx, cy = x0 + panel // 2, 10 + panel // 2
        parts.append(f'<rect x="{x0}" y="10" width="{panel}" height="{panel}" '
                     f'fill="none" stroke="#c0c0c0" stroke-width="1"/>')
        verts = boxes[i]
        if verts:
            ordered = _ccw(verts)
            pts = []
            for v in ordered:
                px = Fraction(cx) + Fraction(v[0]) * scale
                py = Fraction(cy) - Fraction(v[1]) * scale
                pts.append(f"{_num(px)},{_num(py)}")
            tag = "polygon" if len(ordered) > 2 else "polyline"
            parts.append(f'<{tag} points="{" ".join(pts)}" fill="#aed6f1" '
                         f'fill-opacity="0.6" stroke="#1a5276" stroke-width="1.5"/>')
        elif leaf.reduced is not None and leaf.reduced.polytope.rank == 0:
            parts.append(f'<circle cx="{_num(Fraction(cx))}" cy="{_num(Fraction(cy))}" '
                         f'r="2.5" fill="#1a5276"/>')
        alpha = leaf.alpha[0]
        flag = "" if leaf.regular else "*"
        parts.append(f'<text x="{x0 + 4}" y="{10 + panel + 14}" fill="#202020">'
                     f'a={rat_text(alpha)}{flag}</text>')
        parts.append(f'<text x="{x0 + 4}" y="{10 + panel + 27}" fill="#202020">'
                     f'h0={leaf.h0}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def rat_text(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def render(obj, marked=()) -> str:
    """Dispatch on the object type; rank-2 only (d = 1 for reports)."""
    if isinstance(obj, WeightedFan):
        return render_fan(obj)
    if isinstance(obj, HPolytope):
        return render_polytope(obj, marked)
    if isinstance(obj, ReductionReport):
        return render_report(obj)
    raise StackyFanError(f"cannot render a {type(obj).__name__}")
