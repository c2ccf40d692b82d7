"""Regenerate the bundled dimer fixtures.

Models are written as straight-line periodic embeddings; rotation systems
are read off the positions exactly.  Run from the repo root:

    python tools/make_fixtures.py
"""
from __future__ import annotations

import itertools
from fractions import Fraction as Q
from pathlib import Path

from dimerex.dimer import DimerModel, Edge, compute_faces, cyclic_orders_from_positions
from dimerex.io import serialize_dimer
from dimerex.matchings import characteristic_polygon

OUT = Path(__file__).resolve().parents[1] / "src" / "dimerex" / "fixtures"


def make(name, blacks, whites, edges, positions):
    co = cyclic_orders_from_positions(blacks, whites, edges, positions)
    return DimerModel.build(blacks, whites, edges, co, positions, name=name)


def honeycomb():
    # affine-regular: the three edge vectors at the black node sum to zero
    pos = {"b1": (Q(2, 3), Q(2, 3)), "w1": (Q(1, 3), Q(1, 3))}
    edges = [Edge("e1", "b1", "w1", (0, 0)), Edge("e2", "b1", "w1", (1, 0)), Edge("e3", "b1", "w1", (0, 1))]
    return ["b1"], ["w1"], edges, pos


def square():
    q, t = Q(1, 4), Q(3, 4)
    pos = {"b1": (q, q), "b2": (t, t), "w1": (t, q), "w2": (q, t)}
    edges = [
        Edge("e1", "b1", "w1", (0, 0)),
        Edge("e2", "b1", "w1", (-1, 0)),
        Edge("e3", "b1", "w2", (0, 0)),
        Edge("e4", "b1", "w2", (0, -1)),
        Edge("e5", "b2", "w1", (0, 0)),
        Edge("e6", "b2", "w1", (0, 1)),
        Edge("e7", "b2", "w2", (0, 0)),
        Edge("e8", "b2", "w2", (1, 0)),
    ]
    return ["b1", "b2"], ["w1", "w2"], edges, pos


def _frac(x: Q) -> Q:
    return x - (x.numerator // x.denominator)


def cover(base, basis):
    """Pull a model back to the torus R^2 / L with L spanned by the columns of ``basis``."""
    blacks, whites, edges, pos = base
    (a, b), (c, d) = basis  # columns (a, c) and (b, d)
    det = a * d - b * c
    assert det > 0

    def to_new(x, y):
        return (Q(d * x - b * y, det), Q(-c * x + a * y, det))

    reps = {}
    for i, j in itertools.product(range(-det, det + 1), repeat=2):
        u = to_new(i, j)
        key = (_frac(u[0]), _frac(u[1]))
        if key not in reps:
            reps[key] = (i, j)
    cosets = [reps[k] for k in sorted(reps)]
    assert len(cosets) == det

    def coset_of(v):
        u = to_new(*v)
        return cosets.index(reps[(_frac(u[0]), _frac(u[1]))])

    newpos, names = {}, {}
    for n in blacks + whites:
        for k, cs in enumerate(cosets):
            names[(n, k)] = f"{n[0]}{len(names) + 1}"
    # renumber per color
    nb = [names[(n, k)] for n in blacks for k in range(det)]
    nw = [names[(n, k)] for n in whites for k in range(det)]
    rename = {x: f"b{i + 1}" for i, x in enumerate(nb)} | {x: f"w{i + 1}" for i, x in enumerate(nw)}
    for n in blacks + whites:
        for k, cs in enumerate(cosets):
            u = to_new(pos[n][0] + cs[0], pos[n][1] + cs[1])
            newpos[rename[names[(n, k)]]] = (_frac(u[0]), _frac(u[1]))
    new_edges = []
    for e in edges:
        for k, cs in enumerate(cosets):
            bname = rename[names[(e.black, k)]]
            wv = (cs[0] + e.shift[0], cs[1] + e.shift[1])
            wname = rename[names[(e.white, coset_of(wv))]]
            ub = to_new(pos[e.black][0] + cs[0], pos[e.black][1] + cs[1])
            uw = to_new(pos[e.white][0] + wv[0], pos[e.white][1] + wv[1])
            lifted_w = (uw[0] - ub[0] + newpos[bname][0], uw[1] - ub[1] + newpos[bname][1])
            sh = (lifted_w[0] - newpos[wname][0], lifted_w[1] - newpos[wname][1])
            assert sh[0].denominator == 1 and sh[1].denominator == 1
            new_edges.append(Edge(f"e{len(new_edges) + 1}", bname, wname, (int(sh[0]), int(sh[1]))))
    bl = sorted({rename[names[(n, k)]] for n in blacks for k in range(det)}, key=lambda s: int(s[1:]))
    wh = sorted({rename[names[(n, k)]] for n in whites for k in range(det)}, key=lambda s: int(s[1:]))
    return bl, wh, new_edges, newpos


def split_face(base, face_index=0, offset=0):
    """Add an edge across a hexagonal face between opposite boundary nodes."""
    blacks, whites, edges, pos = base
    model = make("tmp", blacks, whites, edges, pos)
    f = compute_faces(model)[face_index]
    assert len(f) == 6
    i, j = offset, offset + 3
    (ni, _), (nj, _) = f.boundary[i], f.boundary[j]
    ci, cj = f.cells[i], f.cells[j]
    if ni in blacks:
        b, w, sh = ni, nj, (cj[0] - ci[0], cj[1] - ci[1])
    else:
        b, w, sh = nj, ni, (ci[0] - cj[0], ci[1] - cj[1])
    e = Edge(f"e{len(edges) + 1}", b, w, sh)
    return blacks, whites, edges + [e], pos


def describe(model):
    poly = characteristic_polygon(model)
    return dict(
        faces=len(compute_faces(model)),
        vertices=poly.vertices,
        boundary=len(poly.boundary_points),
        interior=poly.interior_points,
        mult=poly.multiplicity,
    )


def main():
    hc = honeycomb()
    models = {"c3": make("c3", *hc)}
    # index-3 sublattice: C^3/Z3 with weights (1,1,1)
    models["dp0"] = make("dp0", *cover(hc, ((3, 1), (0, 1))))
    # index-4 sublattice: C^3/Z4 with weights (1,1,2), polygon with a non-vertex boundary point
    models["wf1"] = make("wf1", *cover(hc, ((2, 1), (0, 2))))
    models["f0"] = make("f0", *square())
    models["f1"] = make("f1", *split_face(cover(hc, ((3, 1), (0, 1)))))
    for name, m in models.items():
        print(name, describe(m))
        (OUT / f"{name}.json").write_text(serialize_dimer(m))


if __name__ == "__main__":
    main()
