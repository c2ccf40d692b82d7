"""Dimer models on the torus as decorated ribbon graphs.

A model is a bipartite graph with a counterclockwise rotation system at every
node and an integer shift on every edge: lifting the black endpoint of edge
``e`` to the fundamental cell, its white endpoint sits in cell ``shift(e)``.
From this data we trace faces, build the dual quiver with its F-term
relations, and trace zig-zag paths.

Darts
-----
A dart ``(x, e)`` is edge ``e`` traversed away from node ``x``.  The face on
the *left* of the dart ``(x, e)`` is the sector at ``x`` between ``e`` and the
next edge counterclockwise.  Face tracing follows that face around: arriving
at ``y`` along ``e`` the walk continues along the edge preceding ``e`` in the
counterclockwise order at ``y``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

from .lattice import angle_key

NodeId = str
EdgeId = str
Dart = tuple[NodeId, EdgeId]
Vec2 = tuple[int, int]


class DimerStructureError(ValueError):
    """Malformed input: dangling endpoint, duplicate id, bad rotation system."""

    def __init__(self, message: str, offending: str | None = None):
        super().__init__(message)
        self.offending = offending


def natural_key(ident: str):
    """Sort ``e2`` before ``e10``; used for every deterministic id ordering."""
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", str(ident)))


def vadd(u: Sequence[int], v: Sequence[int]) -> Vec2:
    return (u[0] + v[0], u[1] + v[1])


def vsub(u: Sequence[int], v: Sequence[int]) -> Vec2:
    return (u[0] - v[0], u[1] - v[1])


def vneg(u: Sequence[int]) -> Vec2:
    return (-u[0], -u[1])


@dataclass(frozen=True)
class Edge:
    id: EdgeId
    black: NodeId
    white: NodeId
    shift: Vec2 = (0, 0)


@dataclass(frozen=True)
class DimerModel:
    blacks: tuple[NodeId, ...]
    whites: tuple[NodeId, ...]
    edges: tuple[Edge, ...]
    # (node, counterclockwise edge ids) pairs
    rotation: tuple[tuple[NodeId, tuple[EdgeId, ...]], ...]
    positions: tuple[tuple[NodeId, tuple[Fraction, Fraction]], ...] = field(default=(), compare=False)
    name: str = field(default="", compare=False)

    @classmethod
    def build(
        cls,
        blacks: Sequence[NodeId],
        whites: Sequence[NodeId],
        edges: Sequence[Edge | tuple],
        cyclic_order: Mapping[NodeId, Sequence[EdgeId]],
        positions: Mapping[NodeId, Sequence] | None = None,
        name: str = "",
    ) -> "DimerModel":
        """Normalize loose containers into the hashable frozen form.

        Raises DimerStructureError for duplicate ids or dangling endpoints.
        """
        blacks = tuple(str(b) for b in blacks)
        whites = tuple(str(w) for w in whites)
        seen: set[str] = set()
        for n in blacks + whites:
            if n in seen:
                raise DimerStructureError(f"duplicate node id {n!r}", n)
            seen.add(n)
        es: list[Edge] = []
        eids: set[str] = set()
        for e in edges:
            if not isinstance(e, Edge):
                eid, b, w, *rest = e
                sh = tuple(rest[0]) if rest else (0, 0)
                e = Edge(str(eid), str(b), str(w), (int(sh[0]), int(sh[1])))
            if e.id in eids:
                raise DimerStructureError(f"duplicate edge id {e.id!r}", e.id)
            eids.add(e.id)
            if e.black not in blacks:
                raise DimerStructureError(
                    f"edge {e.id!r}: black endpoint {e.black!r} is not a black node", e.id
                )
            if e.white not in whites:
                raise DimerStructureError(
                    f"edge {e.id!r}: white endpoint {e.white!r} is not a white node", e.id
                )
            es.append(e)
        rot = []
        for n in blacks + whites:
            if n not in cyclic_order:
                raise DimerStructureError(f"node {n!r} has no cyclic order", n)
            rot.append((n, tuple(str(x) for x in cyclic_order[n])))
        extra = set(map(str, cyclic_order)) - seen
        if extra:
            n = sorted(extra, key=natural_key)[0]
            raise DimerStructureError(f"cyclic order given for unknown node {n!r}", n)
        pos = ()
        if positions:
            pos = tuple(
                (str(n), (Fraction(p[0]), Fraction(p[1]))) for n, p in sorted(positions.items())
            )
        return cls(blacks, whites, tuple(es), tuple(rot), pos, name)

    # -- lookups -----------------------------------------------------------

    @cached_property
    def edge(self) -> dict[EdgeId, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def cyclic_order(self) -> dict[NodeId, tuple[EdgeId, ...]]:
        return dict(self.rotation)

    @cached_property
    def position(self) -> dict[NodeId, tuple[Fraction, Fraction]]:
        return dict(self.positions)

    @cached_property
    def _index(self) -> dict[Dart, int]:
        return {(n, e): i for n, order in self.rotation for i, e in enumerate(order)}

    @cached_property
    def black_set(self) -> frozenset:
        return frozenset(self.blacks)

    @property
    def nodes(self) -> tuple[NodeId, ...]:
        return self.blacks + self.whites

    @cached_property
    def edge_ids(self) -> tuple[EdgeId, ...]:
        return tuple(sorted(self.edge, key=natural_key))

    def is_black(self, node: NodeId) -> bool:
        return node in self.black_set

    def other_end(self, node: NodeId, eid: EdgeId) -> NodeId:
        e = self.edge[eid]
        return e.white if node == e.black else e.black

    def displacement(self, node: NodeId, eid: EdgeId) -> Vec2:
        """Cell displacement when traversing ``eid`` away from ``node``."""
        e = self.edge[eid]
        return e.shift if node == e.black else vneg(e.shift)

    def ccw_next(self, node: NodeId, eid: EdgeId, step: int = 1) -> EdgeId:
        order = self.cyclic_order[node]
        return order[(self._index[(node, eid)] + step) % len(order)]

    def degree(self, node: NodeId) -> int:
        return len(self.cyclic_order[node])


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    violations: list[str]
    warnings: list[str]
    num_faces: int | None

    @property
    def passed(self) -> bool:
        return not self.violations


def _rotation_violations(model: DimerModel) -> list[str]:
    out = []
    incident: dict[str, list[str]] = {n: [] for n in model.nodes}
    for e in model.edges:
        incident[e.black].append(e.id)
        incident[e.white].append(e.id)
    for n in model.nodes:
        got = sorted(model.cyclic_order[n], key=natural_key)
        want = sorted(incident[n], key=natural_key)
        if got != want:
            out.append(f"cyclic order at {n!r} lists {got} but incident edges are {want}")
    return out


def validate_dimer(model: DimerModel) -> ValidationReport:
    violations = _rotation_violations(model)
    warnings = []
    if len(model.blacks) != len(model.whites):
        warnings.append(
            f"|B| = {len(model.blacks)} != |W| = {len(model.whites)}: no perfect matching exists"
        )
    if violations:
        return ValidationReport(violations, warnings, None)
    faces = _trace_faces(model)
    nf = len(faces)
    euler = len(model.blacks) + len(model.whites) - len(model.edges) + nf
    if euler != 0:
        violations.append(f"Euler relation fails: |B|+|W|-|E|+|F| = {euler}")
    for f in faces:
        total = (0, 0)
        for d in f:
            total = vadd(total, model.displacement(*d))
        if total != (0, 0):
            violations.append(
                f"face through dart {f[0]} is not a disk: boundary has total shift {total}"
            )
    return ValidationReport(violations, warnings, nf)


def require_valid(model: DimerModel) -> None:
    rep = validate_dimer(model)
    if not rep.passed:
        raise DimerStructureError("invalid dimer model: " + "; ".join(rep.violations))


# ---------------------------------------------------------------------------
# faces


def _dart_key(d: Dart):
    return (natural_key(d[0]), natural_key(d[1]))


def _trace_faces(model: DimerModel) -> list[tuple[Dart, ...]]:
    darts = sorted(model._index, key=_dart_key)
    seen: set[Dart] = set()
    faces = []
    for start in darts:
        if start in seen:
            continue
        cyc = []
        d = start
        while d not in seen:
            seen.add(d)
            cyc.append(d)
            y = model.other_end(*d)
            d = (y, model.ccw_next(y, d[1], -1))
        if d != start:
            raise DimerStructureError("rotation system does not define a permutation of darts")
        faces.append(tuple(cyc))
    faces.sort(key=lambda f: min(_dart_key(d) for d in f))
    # rotate each boundary to begin at its minimal dart
    out = []
    for f in faces:
        i = min(range(len(f)), key=lambda j: _dart_key(f[j]))
        out.append(f[i:] + f[:i])
    return out


@dataclass(frozen=True)
class Face:
    id: int
    boundary: tuple[Dart, ...]
    # cell of the tail node of each boundary dart in the face's canonical lift
    cells: tuple[Vec2, ...]

    @property
    def nodes(self) -> tuple[NodeId, ...]:
        return tuple(d[0] for d in self.boundary)

    def __len__(self) -> int:
        return len(self.boundary)


@lru_cache(maxsize=64)
def compute_faces(model: DimerModel) -> tuple[Face, ...]:
    """Faces with ids assigned by their minimal (node, edge) incidence."""
    bad = _rotation_violations(model)
    if bad:
        raise DimerStructureError(bad[0])
    out = []
    for i, f in enumerate(_trace_faces(model)):
        cells = [(0, 0)]
        for d in f[:-1]:
            cells.append(vadd(cells[-1], model.displacement(*d)))
        out.append(Face(i, f, tuple(cells)))
    return tuple(out)


@lru_cache(maxsize=64)
def dart_faces(model: DimerModel) -> dict[Dart, tuple[int, Vec2]]:
    """Map each dart to (face id on its left, tail cell in that face's lift)."""
    out = {}
    for f in compute_faces(model):
        for d, c in zip(f.boundary, f.cells):
            out[d] = (f.id, c)
    return out


# ---------------------------------------------------------------------------
# quiver


@dataclass(frozen=True)
class Arrow:
    id: EdgeId
    source: int
    target: int
    # translation between the canonical lifts of source and target faces
    lift: Vec2


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[int, ...]
    arrows: dict[EdgeId, Arrow]
    # arrow id -> (p_plus, p_minus); paths as arrow ids in traversal order
    relations: dict[EdgeId, tuple[tuple[EdgeId, ...], tuple[EdgeId, ...]]]

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(sorted(self.arrows))))

    @cached_property
    def out_arrows(self) -> dict[int, tuple[EdgeId, ...]]:
        out: dict[int, list[EdgeId]] = {v: [] for v in self.vertices}
        for a in self.arrows.values():
            out[a.source].append(a.id)
        return {v: tuple(sorted(x, key=natural_key)) for v, x in out.items()}


@lru_cache(maxsize=64)
def quiver_of(model: DimerModel) -> Quiver:
    """Dual quiver: white endpoint on the right of every arrow."""
    require_valid(model)
    faces = compute_faces(model)
    df = dart_faces(model)
    arrows = {}
    for e in model.edges:
        s, cs = df[(e.white, e.id)]
        t, ct = df[(e.black, e.id)]
        # edge copy with black at cell 0, white at cell shift
        lift = vsub(vsub(cs, ct), e.shift)
        arrows[e.id] = Arrow(e.id, s, t, lift)
    relations = {}
    for e in model.edges:
        dw = model.degree(e.white)
        db = model.degree(e.black)
        # clockwise around the white node, starting after e
        p_plus = tuple(model.ccw_next(e.white, e.id, -k) for k in range(1, dw))
        # counterclockwise around the black node
        p_minus = tuple(model.ccw_next(e.black, e.id, k) for k in range(1, db))
        relations[e.id] = (p_plus, p_minus)
    return Quiver(tuple(f.id for f in faces), arrows, relations)


# ---------------------------------------------------------------------------
# zig-zag paths


@dataclass(frozen=True)
class ZigzagPath:
    # darts in traversal order; edges alternate black->white and white->black
    darts: tuple[Dart, ...]
    homology: Vec2

    @property
    def edges(self) -> tuple[EdgeId, ...]:
        return tuple(d[1] for d in self.darts)


def _zigzag_next(model: DimerModel, d: Dart) -> Dart:
    y = model.other_end(*d)
    # maximal right turn at white nodes, maximal left turn at black nodes
    step = 1 if not model.is_black(y) else -1
    return (y, model.ccw_next(y, d[1], step))


@lru_cache(maxsize=64)
def zigzag_paths(model: DimerModel) -> tuple[ZigzagPath, ...]:
    bad = _rotation_violations(model)
    if bad:
        raise DimerStructureError(bad[0])
    seen: set[Dart] = set()
    out = []
    for start in sorted(model._index, key=_dart_key):
        if start in seen:
            continue
        cyc = []
        total = (0, 0)
        d = start
        while d not in seen:
            seen.add(d)
            cyc.append(d)
            total = vadd(total, model.displacement(*d))
            d = _zigzag_next(model, d)
        out.append(ZigzagPath(tuple(cyc), total))
    return tuple(out)


@dataclass
class ConsistencyReport:
    zero_class: list[int]
    self_crossing: list[int]
    parallel_sharing: list[tuple[int, int, EdgeId]]

    @property
    def passed(self) -> bool:
        return not (self.zero_class or self.self_crossing or self.parallel_sharing)

    def criteria(self) -> dict[str, bool]:
        return {
            "nonzero_classes": not self.zero_class,
            "no_self_crossing": not self.self_crossing,
            "no_parallel_sharing": not self.parallel_sharing,
        }


def positively_parallel(u: Vec2, v: Vec2) -> bool:
    return u[0] * v[1] - u[1] * v[0] == 0 and u[0] * v[0] + u[1] * v[1] > 0


def check_consistency(model: DimerModel) -> ConsistencyReport:
    """Zig-zag criteria: nonzero classes, no self-crossing, no parallel pair sharing an edge.

    Only the rotation system is required; a model failing face checks can
    still be diagnosed here.
    """
    zz = zigzag_paths(model)
    zero = [i for i, z in enumerate(zz) if z.homology == (0, 0)]
    self_cross = []
    # a path meeting one of its own translates is a parallel pair sharing an edge
    self_translate = []
    for i, z in enumerate(zz):
        # lift of each edge occurrence along one period
        pos: dict[EdgeId, list[Vec2]] = {}
        cell = (0, 0)
        for d in z.darts:
            e = model.edge[d[1]]
            black_cell = cell if d[0] == e.black else vadd(cell, model.displacement(*d))
            pos.setdefault(d[1], []).append(black_cell)
            cell = vadd(cell, model.displacement(*d))
        h = z.homology
        for lifts in pos.values():
            if len(lifts) < 2:
                continue
            diff = vsub(lifts[1], lifts[0])
            # same lifted edge iff the lifts differ by a multiple of the period
            if h == (0, 0):
                hit = diff == (0, 0)
            else:
                hit = diff[0] * h[1] - diff[1] * h[0] == 0 and (
                    (diff[0] % h[0] == 0) if h[0] else (diff[1] % h[1] == 0)
                )
            if hit:
                self_cross.append(i)
                break
        for e, lifts in pos.items():
            if len(lifts) >= 2 and i not in self_cross:
                self_translate.append((i, i, e))
    owners: dict[EdgeId, list[int]] = {}
    for i, z in enumerate(zz):
        for e in z.edges:
            owners.setdefault(e, []).append(i)
    sharing = sorted(set(self_translate))
    for e in model.edge_ids:
        i, j = owners[e]
        if i != j and positively_parallel(zz[i].homology, zz[j].homology):
            sharing.append((i, j, e))
    return ConsistencyReport(zero, self_cross, sharing)


# ---------------------------------------------------------------------------
# fixture construction helpers


def cyclic_orders_from_positions(
    nodes_black: Sequence[NodeId],
    nodes_white: Sequence[NodeId],
    edges: Sequence[Edge],
    positions: Mapping[NodeId, Sequence[Fraction]],
) -> dict[NodeId, list[EdgeId]]:
    """Counterclockwise rotation system of a straight-line periodic embedding."""
    out: dict[NodeId, list[tuple]] = {n: [] for n in list(nodes_black) + list(nodes_white)}
    for e in edges:
        pb = positions[e.black]
        pw = positions[e.white]
        vec = (pw[0] + e.shift[0] - pb[0], pw[1] + e.shift[1] - pb[1])
        out[e.black].append((angle_key(vec), e.id))
        out[e.white].append((angle_key((-vec[0], -vec[1])), e.id))
    result = {}
    for n, items in out.items():
        items.sort(key=lambda t: t[0])
        for (k1, _), (k2, _) in zip(items, items[1:]):
            if k1 == k2:
                raise ValueError(f"two edges leave {n!r} in the same direction")
        result[n] = [eid for _, eid in items]
    return result
