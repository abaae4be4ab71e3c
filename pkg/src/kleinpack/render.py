"""SVG drawings of packings, optionally labelled by curvature."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .apollonian import Packing
from .inversive import center_radius


def _num(x: float) -> str:
    return f"{x:.10g}"


def curvature_label(k) -> str:
    if isinstance(k, int) or (isinstance(k, Fraction) and k.denominator == 1):
        return str(int(k))
    if isinstance(k, Fraction):
        return f"{k.numerator}/{k.denominator}"
    return f"{float(k):.4g}"


def _viewport(p: Packing, margin: float):
    outer = [g for g in p.generators if g.curv < 0]
    if outer:
        c, r = center_radius(outer[0])
        x0, y0, x1, y1 = c.real - r, c.imag - r, c.real + r, c.imag + r
    else:
        boxes = [(c.real - r, c.imag - r, c.real + r, c.imag + r)
                 for c, r in (center_radius(k) for k in p.circles)]
        x0 = min(b[0] for b in boxes)
        y0 = min(b[1] for b in boxes)
        x1 = max(b[2] for b in boxes)
        y1 = max(b[3] for b in boxes)
        if p.is_periodic:
            for g in p.generators:  # strip lines bound the window vertically
                if g.curv == 0 and g.mx == 0:
                    y = float(g.cocurv) / 2 * float(g.my)
                    y0, y1 = min(y0, y), max(y1, y)
    pad = margin * max(x1 - x0, y1 - y0)
    return x0 - pad, y0 - pad, x1 + pad, y1 + pad


def render_svg(p: Packing, *, labels: bool = True, stroke_width: float = 1.0,
               size: int = 800, viewport=None, margin: float = 0.02,
               min_label_radius: float = 0.0) -> str:
    """SVG 1.1 document with one ``<circle>`` per circle of the packing.

    The bounding circle (if any) is drawn too; strip lines are drawn across the
    viewport.  ``viewport`` is ``(xmin, ymin, xmax, ymax)`` in plane
    coordinates; by default it is fitted to the bounding circle or to the
    stored period.  ``stroke_width`` is in output pixels.
    """
    if not len(p):
        raise ValueError("nothing to render: packing is empty")
    x0, y0, x1, y1 = viewport or _viewport(p, margin)
    w, h = x1 - x0, y1 - y0
    px = max(w, h) / size  # plane units per pixel
    sw = _num(stroke_width * px)
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_num(w / px)}" height="{_num(h / px)}" '
        f'viewBox="{_num(x0)} {_num(-y1)} {_num(w)} {_num(h)}">',
        f'<g fill="none" stroke="black" stroke-width="{sw}">',
    ]
    for g in p.generators:
        if g.curv < 0:
            c, r = center_radius(g)
            out.append(f'<circle cx="{_num(c.real)}" cy="{_num(-c.imag)}" r="{_num(r)}"/>')
        elif g.curv == 0:
            # line n.p = offset; draw across the viewport
            nx, ny, off = float(g.mx), float(g.my), float(g.cocurv) / 2
            if abs(ny) >= abs(nx):
                ya, yb = (off - nx * x0) / ny, (off - nx * x1) / ny
                seg = (x0, ya, x1, yb)
            else:
                xa, xb = (off - ny * y0) / nx, (off - ny * y1) / nx
                seg = (xa, y0, xb, y1)
            out.append(
                f'<line x1="{_num(seg[0])}" y1="{_num(-seg[1])}" '
                f'x2="{_num(seg[2])}" y2="{_num(-seg[3])}"/>'
            )
    for k in p.circles:
        c, r = center_radius(k)
        out.append(f'<circle cx="{_num(c.real)}" cy="{_num(-c.imag)}" r="{_num(r)}"/>')
    out.append("</g>")
    if labels:
        out.append('<g font-family="sans-serif" text-anchor="middle" '
                   'dominant-baseline="central" fill="black">')
        for k in p.circles:
            c, r = center_radius(k)
            if r < min_label_radius:
                continue
            text = curvature_label(k.curv)
            fs = _num(1.2 * r / max(1, len(text)) * 1.6)
            out.append(
                f'<text x="{_num(c.real)}" y="{_num(-c.imag)}" font-size="{fs}">'
                f"{escape(text)}</text>"
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
