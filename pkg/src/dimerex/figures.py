"""Static SVG figures: the dimer on a fundamental domain, the dual quiver,
the polygon with multiplicities, and the Hom digraph of a collection.

Output is plain SVG text built from exact coordinates rounded to a fixed
number of digits, so equal inputs give byte-identical files.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from pathlib import Path as FsPath

from .dimer import DimerModel, compute_faces, natural_key, quiver_of
from .matchings import Polygon

SIZE = 400
PAD = 40


def _fmt(x) -> str:
    return f"{float(x):.2f}"


def _svg(width: int, height: int, body: list[str], title: str) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    defs = (
        "<defs>"
        '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto">'
        '<path d="M0,0 L10,5 L0,10 z" fill="#333"/></marker>'
        f'<clipPath id="cell"><rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}"/></clipPath>'
        "</defs>"
    )
    return "\n".join([head, f"<title>{title}</title>", defs, *body, "</svg>", ""])


def node_positions(model: DimerModel, seed: int = 0) -> dict[str, tuple[Fraction, Fraction]]:
    """Given positions, or a seeded placement on a grid of 1/64 steps."""
    if model.positions:
        return dict(model.position)
    rng = random.Random(seed)
    return {n: (Fraction(rng.randrange(64), 64), Fraction(rng.randrange(64), 64)) for n in model.nodes}


def _to_px(x, y) -> tuple[str, str]:
    return _fmt(PAD + x * SIZE), _fmt(PAD + (1 - y) * SIZE)


def dimer_svg(model: DimerModel, seed: int = 0) -> str:
    pos = node_positions(model, seed)
    body = [f'<rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}" fill="none" stroke="#999" stroke-dasharray="4 3"/>']
    lines = []
    for e in model.edges:
        bx, by = pos[e.black]
        wx, wy = pos[e.white]
        wx, wy = wx + e.shift[0], wy + e.shift[1]
        # draw the edge and its translate ending at the white node, clipped to the cell
        for dx, dy in {(0, 0), (-e.shift[0], -e.shift[1])}:
            x1, y1 = _to_px(bx + dx, by + dy)
            x2, y2 = _to_px(wx + dx, wy + dy)
            lines.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#222" stroke-width="2"/>')
    body.append('<g clip-path="url(#cell)">' + "".join(sorted(lines)) + "</g>")
    for n in sorted(model.nodes, key=natural_key):
        x, y = _to_px(*pos[n])
        fill = "#000" if model.is_black(n) else "#fff"
        body.append(f'<circle cx="{x}" cy="{y}" r="7" fill="{fill}" stroke="#000" stroke-width="2"/>')
        body.append(f'<text x="{x}" y="{_fmt(float(y) - 11)}" font-size="11" text-anchor="middle">{n}</text>')
    return _svg(SIZE + 2 * PAD, SIZE + 2 * PAD, body, f"dimer {model.name}".strip())


def face_positions(model: DimerModel, seed: int = 0) -> dict[int, tuple[Fraction, Fraction]]:
    """Centroid of each face's lifted boundary nodes, reduced mod 1."""
    pos = node_positions(model, seed)
    out = {}
    for f in compute_faces(model):
        xs = [pos[d[0]][0] + c[0] for d, c in zip(f.boundary, f.cells)]
        ys = [pos[d[0]][1] + c[1] for d, c in zip(f.boundary, f.cells)]
        cx, cy = sum(xs) / len(xs), sum(ys) / len(ys)
        out[f.id] = (cx - math.floor(cx), cy - math.floor(cy))
    return out


def quiver_svg(model: DimerModel, seed: int = 0) -> str:
    q = quiver_of(model)
    fpos = face_positions(model, seed)
    body = [f'<rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}" fill="none" stroke="#999" stroke-dasharray="4 3"/>']
    for aid in sorted(q.arrows, key=natural_key):
        a = q.arrows[aid]
        sx, sy = fpos[a.source]
        tx, ty = fpos[a.target]
        # nearest translate of the target, so every arrow is short
        best = min(
            ((tx + i, ty + j) for i in (-1, 0, 1) for j in (-1, 0, 1)),
            key=lambda p: ((p[0] - sx) ** 2 + (p[1] - sy) ** 2, p),
        )
        if a.source == a.target:
            best = (sx + Fraction(a.lift[0] or 1, 5), sy + Fraction(a.lift[1], 5))
        x1, y1 = _to_px(sx, sy)
        x2, y2 = _to_px(*best)
        body.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#333" stroke-width="1.5" marker-end="url(#arrow)"/>'
        )
        mx, my = _to_px((sx + best[0]) / 2, (sy + best[1]) / 2)
        body.append(f'<text x="{mx}" y="{my}" font-size="10" fill="#a00">{aid}</text>')
    for v in q.vertices:
        x, y = _to_px(*fpos[v])
        body.append(f'<circle cx="{x}" cy="{y}" r="11" fill="#ffd" stroke="#000"/>')
        body.append(f'<text x="{x}" y="{_fmt(float(y) + 4)}" font-size="11" text-anchor="middle">{v}</text>')
    return _svg(SIZE + 2 * PAD, SIZE + 2 * PAD, body, f"quiver {model.name}".strip())


def polygon_svg(poly: Polygon) -> str:
    pts = list(poly.multiplicity) + list(poly.vertices)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    unit = SIZE / span
    x0, y0 = min(xs), min(ys)

    def px(p):
        return _fmt(PAD + (p[0] - x0) * unit), _fmt(PAD + SIZE - (p[1] - y0) * unit)

    body = []
    hull = " ".join(",".join(px(v)) for v in poly.vertices)
    body.append(f'<polygon points="{hull}" fill="#eef" stroke="#004" stroke-width="2"/>')
    interior = set(poly.interior_points)
    for p in sorted(set(pts)):
        x, y = px(p)
        m = poly.multiplicity.get(p, 0)
        if p in interior:
            body.append(f'<rect x="{_fmt(float(x) - 7)}" y="{_fmt(float(y) - 7)}" width="14" height="14" fill="#c00" class="interior"/>')
        else:
            body.append(f'<circle cx="{x}" cy="{y}" r="6" fill="#004" class="boundary"/>')
        body.append(f'<text x="{_fmt(float(x) + 9)}" y="{_fmt(float(y) - 9)}" font-size="13">{m}</text>')
    return _svg(SIZE + 2 * PAD, SIZE + 2 * PAD, body, "characteristic polygon")


def hom_digraph_svg(hom: dict[tuple[int, int], int], order: list[int]) -> str:
    verts = list(order) or sorted({v for v, _ in hom})
    n = len(verts)
    c = PAD + SIZE / 2
    r = SIZE / 2 - 20
    place = {}
    for k, v in enumerate(verts):
        ang = math.pi / 2 - 2 * math.pi * k / max(n, 1)
        place[v] = (c + r * math.cos(ang), c - r * math.sin(ang))
    body = []
    for (v, w), h in sorted(hom.items()):
        if v == w or not h:
            continue
        (x1, y1), (x2, y2) = place[v], place[w]
        dx, dy = x2 - x1, y2 - y1
        d = math.hypot(dx, dy) or 1.0
        # stop short of the target node
        ex, ey = x2 - 16 * dx / d, y2 - 16 * dy / d
        body.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(ex)}" y2="{_fmt(ey)}" stroke="#333" marker-end="url(#arrow)"/>'
        )
        body.append(f'<text x="{_fmt((x1 + x2) / 2)}" y="{_fmt((y1 + y2) / 2)}" font-size="12" fill="#a00">{h}</text>')
    for k, v in enumerate(verts):
        x, y = place[v]
        body.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="14" fill="#dfd" stroke="#000"/>')
        label = f"{k}:{v}" if order else str(v)
        body.append(f'<text x="{_fmt(x)}" y="{_fmt(y + 4)}" font-size="11" text-anchor="middle">{label}</text>')
    return _svg(SIZE + 2 * PAD, SIZE + 2 * PAD, body, "Hom digraph")


def emit_figures(model: DimerModel, polygon: Polygon, verification=None, seed: int = 0) -> dict[str, str]:
    """Figure name -> SVG text.  The Hom digraph needs a verification report."""
    figs = {
        "dimer.svg": dimer_svg(model, seed),
        "quiver.svg": quiver_svg(model, seed),
        "polygon.svg": polygon_svg(polygon),
    }
    if verification is not None:
        figs["hom.svg"] = hom_digraph_svg(verification.hom, verification.order)
    return figs


def write_figures(figs: dict[str, str], directory) -> list[FsPath]:
    out = FsPath(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, text in sorted(figs.items()):
        p = out / name
        p.write_text(text)
        paths.append(p)
    return paths
