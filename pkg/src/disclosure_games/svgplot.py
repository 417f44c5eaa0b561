"""Winner-region figures on the unit value square, as standalone SVG.

Buyer A's value runs along the x axis and buyer B's up the y axis.  For
each pair of disclosed intervals the three winner regions (A in blue,
B in green, no sale in gray) are exact polygons from the same clipping
geometry the surplus integrals use; their rational areas are checked to
tile the square before anything is converted to float for emission.
"""

from __future__ import annotations

from fractions import Fraction

from .core import IntervalPartition, format_rational
from .geometry import polygon_area
from .uniform2 import UniformSegment, winner_region

VIEW = 1000
COLOR_A = "#4472c4"
COLOR_B = "#70ad47"
COLOR_NONE = "#ededed"
COLOR_BOUNDARY = "#c00000"


def _svg_points(poly) -> str:
    pts = []
    for x, y in poly:
        px = float(x) * VIEW
        py = (1.0 - float(y)) * VIEW  # y grows upward in value space
        pts.append(f"{px:.2f},{py:.2f}")
    return " ".join(pts)


def allocation_svg(pa: IntervalPartition, pb: IntervalPartition) -> str:
    """Render the winner regions for every pair of disclosed intervals."""
    shapes: list[tuple[list, str]] = []
    covered = Fraction(0)
    for a, b in pa.blocks():
        for c, d in pb.blocks():
            seg_a = UniformSegment(a, b)
            seg_b = UniformSegment(c, d)
            cell = (b - a) * (d - c)
            cell_sum = Fraction(0)
            for winner, color in (("A", COLOR_A), ("B", COLOR_B), (None, COLOR_NONE)):
                poly = winner_region(seg_a, seg_b, winner)
                area = polygon_area(poly)
                cell_sum += area
                if area > 0:
                    shapes.append((poly, color))
            if cell_sum != cell:
                raise AssertionError(
                    f"regions cover {format_rational(cell_sum)} of a "
                    f"{format_rational(cell)} cell"
                )
            covered += cell_sum
    if covered != 1:
        raise AssertionError(f"regions tile {format_rational(covered)} of the unit square")
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW} {VIEW}" '
        f'width="{VIEW}" height="{VIEW}">',
        f'<rect width="{VIEW}" height="{VIEW}" fill="{COLOR_NONE}"/>',
    ]
    for poly, color in shapes:
        lines.append(
            f'<polygon points="{_svg_points(poly)}" fill="{color}" '
            f'stroke="none"/>'
        )
    dash = 'stroke-dasharray="12,8"'
    for t in pa.breakpoints[1:-1]:
        x = float(t) * VIEW
        lines.append(
            f'<line x1="{x:.2f}" y1="0" x2="{x:.2f}" y2="{VIEW}" '
            f'stroke="{COLOR_BOUNDARY}" stroke-width="3" {dash}/>'
        )
    for t in pb.breakpoints[1:-1]:
        y = (1.0 - float(t)) * VIEW
        lines.append(
            f'<line x1="0" y1="{y:.2f}" x2="{VIEW}" y2="{y:.2f}" '
            f'stroke="{COLOR_BOUNDARY}" stroke-width="3" {dash}/>'
        )
    lines.append(
        f'<rect width="{VIEW}" height="{VIEW}" fill="none" stroke="#333" stroke-width="2"/>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
