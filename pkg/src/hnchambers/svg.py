"""Deterministic SVG drawing of a rank 2 chamber decomposition.

Rays are drawn through the origin up to the chord joining the two cone
generators; for Σ0 that chord is the slice x + y = 1.  All geometry is exact
until emission, where coordinates are rounded half-to-even to 6 decimals.
"""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .chambers import Chamber
from .errors import RankUnsupported
from .lattice import AmpleCone, DivClass, cross

WIDTH = 480
HEIGHT = 480
MARGIN = 40
PALETTE = ["#7995c4", "#e6a37d", "#80be8e", "#d37a7d", "#a195c6", "#ae9a88", "#e3a8d2", "#d9cb97"]
SEMISTABLE_COLOR = "#222222"


def fmt(x) -> str:
    """Exact rational → fixed 6-decimal string, round half to even."""
    scaled = round(Fraction(x) * 10**6)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**6)
    return f"{sign}{whole}.{frac:06d}"


def chamber_text(ch: Chamber) -> str:
    if ch.id.kind == "Semistable":
        return "semistable (declared candidates)"
    if ch.id.kind == "Destab":
        return f"0 ⊂ {ch.id.label} ⊂ T_X"
    return "ambiguous: " + ", ".join(ch.id.labels)


def _slice_point(ray: DivClass, g1: DivClass, g2: DivClass) -> tuple[Fraction, Fraction]:
    # where the line through `ray` meets the chord g1 → g2
    a, b = cross(g1, ray), cross(ray, g2)
    s = a / (a + b)
    return (g1[0] + s * (g2[0] - g1[0]), g1[1] + s * (g2[1] - g1[1]))


def render_chambers_svg(chambers: list[Chamber], cone: AmpleCone, title: str = "") -> str:
    if cone.generators is None or any(len(g) != 2 for g in cone.generators):
        raise RankUnsupported("the chamber figure needs a rank 2 cone with generators")
    g1, g2 = cone.generators
    ends = [_slice_point(g1, g1, g2), _slice_point(g2, g1, g2)]
    xs = [Fraction(0)] + [p[0] for p in ends]
    ys = [Fraction(0)] + [p[1] for p in ends]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or Fraction(1)
    scale = Fraction(WIDTH - 2 * MARGIN, 1) / span
    x0, y0 = min(xs), min(ys)

    def px(p) -> str:
        return f"{fmt(MARGIN + (p[0] - x0) * scale)},{fmt(HEIGHT - MARGIN - (p[1] - y0) * scale)}"

    origin = (Fraction(0), Fraction(0))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f"<title>{escape(title or 'ample cone chambers')}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
    ]
    color = 0
    for i, ch in enumerate(chambers):
        a, b = (_slice_point(r, g1, g2) for r in ch.boundary)
        text = escape(chamber_text(ch))
        rays = ";".join(",".join(r.to_strings()) for r in ch.boundary)
        if ch.is_ray:
            ox, oy = px(origin).split(",")
            ax, ay = px(a).split(",")
            out.append(
                f'<g class="chamber ray" data-index="{i}" data-id="{escape(str(ch.id))}" data-rays="{rays}">'
                f'<line x1="{ox}" y1="{oy}" x2="{ax}" y2="{ay}" stroke="{SEMISTABLE_COLOR}" stroke-width="3"/>'
                f'<text x="{ax}" y="{ay}" dy="-6">{text}</text></g>'
            )
            continue
        fill = PALETTE[color % len(PALETTE)] if ch.id.kind != "Semistable" else "#dddddd"
        color += 1
        cx = (a[0] + b[0]) * Fraction(2, 3) / 2
        cy = (a[1] + b[1]) * Fraction(2, 3) / 2
        lx, ly = px((cx, cy)).split(",")
        out.append(
            f'<g class="chamber sector" data-index="{i}" data-id="{escape(str(ch.id))}" data-rays="{rays}">'
            f'<polygon points="{px(origin)} {px(a)} {px(b)}" fill="{fill}" stroke="#555555" stroke-width="1"/>'
            f'<text x="{lx}" y="{ly}" text-anchor="middle">{text}</text></g>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
