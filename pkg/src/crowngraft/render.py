"""Static SVG figures: polygons with weighted diagonals, tip configurations,
crown dual graphs and matching band diagrams.  Output is deterministic."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .crown import DualMetricGraph
from .matching import MinimalMatching
from .moebius import sphere

SIZE = 400
R = 160.0
C = SIZE / 2


def _f(x: float) -> str:
    return f"{x:.3f}"


def _svg(body: list, title: str) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
            f'viewBox="0 0 {SIZE} {SIZE}">')
    return "\n".join([head, f"<title>{escape(title)}</title>",
                      '<rect width="100%" height="100%" fill="white"/>', *body, "</svg>"]) + "\n"


def _xy(z: complex):
    return C + R * z.real, C - R * z.imag


def _disk():
    return [f'<circle cx="{_f(C)}" cy="{_f(C)}" r="{_f(R)}" fill="none" stroke="black"/>']


def _label(x, y, text, size=11, color="black"):
    return (f'<text x="{_f(x)}" y="{_f(y)}" font-size="{size}" fill="{color}" '
            f'text-anchor="middle">{escape(text)}</text>')


def chart(p) -> complex | None:
    """Plane into the unit disk by ``z / (1 + |z|)``; ``None`` for infinity."""
    p = sphere(p)
    if p.is_inf:
        return None
    z = p.value()
    return z / (1 + abs(z))


def _tip_layer(tips, errors=None):
    out = []
    inf_seen = 0
    for k, c in enumerate(tips):
        w = chart(c)
        err = None if errors is None else errors[k]
        if w is None:
            # infinity sits on the boundary circle, stacked from the top
            ang = math.pi / 2 - 0.15 * inf_seen
            inf_seen += 1
            x, y = _xy(complex(math.cos(ang), math.sin(ang)))
            out.append(f'<rect x="{_f(x - 5)}" y="{_f(y - 5)}" width="10" height="10" '
                       f'fill="none" stroke="crimson"/>')
            out.append(_label(x, y - 9, f"c{k}=∞", color="crimson"))
            continue
        x, y = _xy(w)
        if err:
            out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(max(2.0, R * err))}" '
                       f'fill="none" stroke="crimson" stroke-dasharray="2,2"/>')
        out.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="3" fill="crimson"/>')
        out.append(_label(x + 12, y - 6, f"c{k}", color="crimson"))
    return out


def render_polygon(poly, weights=None, tips=None, tip_errors=None, title="polygon") -> str:
    """Disk with the polygon's vertices and sides, diagonals as chords labelled
    by weight, and optionally tips in the ``z / (1 + |z|)`` chart."""
    body = _disk()
    zs = [v.value() for v in poly.vertices]
    n = len(zs)
    pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in map(_xy, zs))
    body.append(f'<polygon points="{pts}" fill="#eef3ff" stroke="navy"/>')
    if weights is not None:
        for e in weights.diagonals.sorted():
            (x1, y1), (x2, y2) = _xy(zs[e[0]]), _xy(zs[e[1]])
            body.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                        f'stroke="darkgreen"/>')
            body.append(_label((x1 + x2) / 2, (y1 + y2) / 2 - 4,
                               f"{float(weights.weights[e]):.3g}", color="darkgreen"))
    for k, z in enumerate(zs):
        x, y = _xy(z)
        body.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="3" fill="navy"/>')
        lx, ly = _xy(z * 1.1)
        body.append(_label(lx, ly + 4, f"a{k}", color="navy"))
    if tips is not None:
        body += _tip_layer(tips, tip_errors)
    return _svg(body, f"{title} (n={n})")


def render_tips(tips, errors=None, title="tips") -> str:
    body = _disk() + _tip_layer(list(tips), errors)
    return _svg(body, title)


def render_dual_graph(g: DualMetricGraph, title="dual graph") -> str:
    """Regions on a circle of radius ``R/2``, finite edges between them, one
    outward stub per crown side; the boundary cycle is drawn thick."""
    body = _disk()
    nv = len(g.vertices)
    pos = []
    for k in range(nv):
        if nv == 1:
            pos.append(0j)
        else:
            pos.append(0.5 * complex(math.cos(2 * math.pi * k / nv), math.sin(2 * math.pi * k / nv)))
    cyc = set(g.cycle)
    for idx, (a, b, length, lab) in enumerate(g.edges):
        (x1, y1), (x2, y2) = _xy(pos[a]), _xy(pos[b])
        width = 3 if idx in cyc else 1
        if a == b:
            body.append(f'<circle cx="{_f(x1)}" cy="{_f(y1 - 12)}" r="12" fill="none" '
                        f'stroke="black" stroke-width="{width}"/>')
            body.append(_label(x1, y1 - 28, f"{float(length):.3g}"))
            continue
        body.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                    f'stroke="black" stroke-width="{width}"/>')
        body.append(_label((x1 + x2) / 2, (y1 + y2) / 2 - 4, f"{float(length):.3g}"))
    for v, side in g.infinite_edges:
        ang = 2 * math.pi * (side - 0.5) / g.m
        end = complex(math.cos(ang), math.sin(ang))
        (x1, y1), (x2, y2) = _xy(pos[v]), _xy(end)
        body.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                    f'stroke="gray" stroke-dasharray="4,3"/>')
        lx, ly = _xy(end * 1.08)
        body.append(_label(lx, ly + 4, f"s{side}", color="gray"))
    for k, z in enumerate(pos):
        x, y = _xy(z)
        body.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="5" fill="steelblue"/>')
    return _svg(body, f"{title} (m={g.m})")


def render_matching(top, bottom, mm: MinimalMatching, title="matching") -> str:
    """Band diagram: top and bottom rows as intervals proportional to weight,
    strands as straight bands between them."""
    top = [float(w) for w in top]
    bottom = [float(w) for w in bottom]
    total = sum(top)
    x0, width, ytop, ybot = 30.0, SIZE - 60.0, 80.0, SIZE - 80.0
    scale = width / total if total else 0.0
    body = []
    for row, y in ((top, ytop), (bottom, ybot)):
        x = x0
        for k, w in enumerate(row):
            body.append(f'<rect x="{_f(x)}" y="{_f(y - 6)}" width="{_f(w * scale)}" height="12" '
                        f'fill="none" stroke="navy"/>')
            body.append(_label(x + w * scale / 2, y - 10 if y == ytop else y + 22, f"{w:g}",
                               color="navy"))
            x += w * scale
    xt = xb = x0
    for k, s in enumerate(mm):
        w = float(s.weight) * scale
        shade = "#cfe3cf" if k % 2 else "#9fc79f"
        pts = [(xt, ytop + 6), (xt + w, ytop + 6), (xb + w, ybot - 6), (xb, ybot - 6)]
        body.append('<polygon points="' + " ".join(f"{_f(a)},{_f(b)}" for a, b in pts)
                    + f'" fill="{shade}" stroke="darkgreen"/>')
        body.append(_label((xt + xb) / 2 + w / 2, (ytop + ybot) / 2, f"{float(s.weight):g}",
                           color="darkgreen"))
        xt += w
        xb += w
    return _svg(body, title)
