"""SVG rendering of 2D tilings: translated polygons colored by coset.

Output is a standalone SVG 1.1 document with coordinates printed to 12
significant digits; byte-identical output for identical input.
"""

from __future__ import annotations

import itertools
from xml.sax.saxutils import quoteattr

from .errors import DimensionUnsupported, InputError
from .lattice import QuasiPeriodicSet, WindowMultiset, list_coset_points
from .linalg import as_vec
from .polytope import Polytope
from .scalar import Scalar

DEFAULT_PALETTE = (
    "#7fb2d9", "#e8a87c", "#9ecf9a", "#d9a7c7", "#e8d07c", "#a8b8c8",
)


def _fmt(x: Scalar) -> str:
    return f"{x.to_float():.12g}"


def render_tiling(polytope: Polytope, translations, window,
                  palette=None, show_points=True) -> str:
    """SVG document showing every translate P + l that meets the window.

    ``translations`` is a QuasiPeriodicSet or WindowMultiset; fills are keyed
    by coset index (window points all use the first palette entry).
    """
    if polytope.dim != 2:
        raise DimensionUnsupported("rendering requires d = 2")
    palette = tuple(palette) if palette else DEFAULT_PALETTE
    wlo, whi = as_vec(window[0]), as_vec(window[1])
    if not (wlo[0] < whi[0] and wlo[1] < whi[1]):
        raise InputError("render window must have positive extent")
    plo, phi = polytope.bounding_box()
    groups = _translate_points(translations, wlo, whi, plo, phi)

    x0, y0 = wlo[0].to_float(), wlo[1].to_float()
    x1, y1 = whi[0].to_float(), whi[1].to_float()
    width, height = x1 - x0, y1 - y0
    stroke = max(width, height) / 400

    def sx(v: float) -> str:
        return f"{v:.12g}"

    def pt(p) -> tuple[float, float]:
        # SVG y grows downward; flip about the window's top edge.
        return p[0].to_float(), y1 - p[1].to_float() + y0

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{sx(x0)} {sx(y0)} {sx(width)} {sx(height)}" '
        f'width="640" height="{sx(640 * height / width)}">',
        f'<rect x="{sx(x0)}" y="{sx(y0)}" width="{sx(width)}" '
        f'height="{sx(height)}" fill="#ffffff"/>',
    ]
    verts = polytope.vertices
    if verts is None:
        raise InputError("rendering needs polytope vertices")
    for gi, pts in enumerate(groups):
        fill = palette[gi % len(palette)]
        for lam in pts:
            corners = [
                pt((vx + lam[0], vy + lam[1])) for vx, vy in verts
            ]
            path = " ".join(f"{sx(a)},{sx(b)}" for a, b in corners)
            lines.append(
                f'<polygon points="{path}" fill={quoteattr(fill)} '
                f'fill-opacity="0.55" stroke="#333333" stroke-width="{sx(stroke)}"/>'
            )
    if show_points:
        for gi, pts in enumerate(groups):
            for lam in pts:
                a, b = pt(lam)
                if x0 <= a <= x1 and y0 <= b <= y1:
                    lines.append(
                        f'<circle cx="{sx(a)}" cy="{sx(b)}" r="{sx(2 * stroke)}" '
                        f'fill="#111111"/>'
                    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _translate_points(translations, wlo, whi, plo, phi):
    """Per-group sorted translation points whose translate meets the window."""
    if isinstance(translations, WindowMultiset):
        pts = [lam for lam, _ in translations.points
               if all(wlo[i] <= lam[i] + phi[i] and lam[i] + plo[i] <= whi[i]
                      for i in range(2))]
        return [sorted(pts)]
    if not isinstance(translations, QuasiPeriodicSet):
        raise InputError("translations must be a QuasiPeriodicSet or WindowMultiset")
    e = [as_vec((1, 0)), as_vec((0, 1))]
    out = []
    for coset in translations.cosets:
        cons = []
        for i in range(2):
            cons.append((e[i], whi[i] - plo[i], False))
            cons.append((tuple(-x for x in e[i]), -(wlo[i] - phi[i]), False))
        box = [
            (wlo[0] - phi[0], wlo[1] - phi[1]), (whi[0] - plo[0], whi[1] - plo[1]),
            (wlo[0] - phi[0], whi[1] - plo[1]), (whi[0] - plo[0], wlo[1] - phi[1]),
        ]
        out.append(sorted(list_coset_points(coset, cons, box)))
    return out
