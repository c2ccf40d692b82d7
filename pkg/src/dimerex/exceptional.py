"""Line-bundle collections on the surface stack attached to a central matching.

For a quiver vertex v and a path p from the base vertex to v, the bundle
E_v has coefficient ``w_{D_i}(p) - w_{D_0}(p)`` on the ray of the boundary
matching D_i.  Cycles change these numbers by a principal divisor, so the
class does not depend on p.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace

from .dimer import DimerModel, compute_faces, quiver_of
from .matchings import (
    PerfectMatching,
    characteristic_polygon,
    classify_matchings,
    enumerate_matchings,
)
from .paths import HomDimTable, make_path, path_weight, quotient_hom_dims, spanning_tree, tree_walk
from .toric import (
    CohomologyTable,
    DivisorClass,
    StackyFan2,
    build_surface_fan,
    cohomology_surface,
    divisor_class_normal_form,
)

Vec2 = tuple[int, int]


class NonInteriorMatchingError(ValueError):
    pass


@dataclass(frozen=True)
class Collection:
    fan: StackyFan2
    bundles: dict[int, DivisorClass]
    d0: int
    base_vertex: int
    origin: Vec2
    # matching id used for each ray, in ray order
    ray_matchings: tuple[int, ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(self.bundles)

    def difference(self, v: int, w: int) -> tuple[int, ...]:
        """Coefficients of E_w - E_v, whose sections are Hom(E_v, E_w)."""
        return tuple(b - a for a, b in zip(self.bundles[v].coefficients, self.bundles[w].coefficients))

    def to_dict(self) -> dict:
        return {
            "d0": self.d0,
            "origin": list(self.origin),
            "rays": [list(v) for v in self.fan.rays],
            "ray_matchings": list(self.ray_matchings),
            "base_vertex": self.base_vertex,
            "bundles": {str(v): list(d.coefficients) for v, d in self.bundles.items()},
            "normal_forms": {str(v): list(d.normal_form) for v, d in self.bundles.items()},
        }


def _directed_paths_from(model: DimerModel, root: int) -> dict[int, tuple]:
    """Shortest directed path (fewest arrows, then smallest ids) to every vertex."""
    q = quiver_of(model)
    prev = {root: ()}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for a in q.out_arrows[x]:
            y = q.arrows[a].target
            if y not in prev:
                prev[y] = prev[x] + (a,)
                queue.append(y)
    return prev


def build_collection(
    model: DimerModel,
    d0: PerfectMatching | int,
    boundary_choice: dict[Vec2, int] | None = None,
    paths: str = "tree",
) -> Collection:
    """Collection for the central candidate ``d0``.

    ``boundary_choice`` maps a boundary lattice point to the matching used
    for its ray where the point carries several matchings.  ``paths``
    selects the path to each vertex: the spanning-tree walk ("tree") or a
    shortest directed path ("directed"); both give the same classes.
    """
    pms = enumerate_matchings(model)
    d0 = pms[d0] if isinstance(d0, int) else d0
    poly = characteristic_polygon(model)
    origin = poly.classes[d0.id]
    if poly.location(origin) != "interior":
        raise NonInteriorMatchingError(
            f"no central candidate: matching {d0.id} has class {origin}, "
            "which is not an interior point of the polygon"
        )
    report = classify_matchings(model, origin)
    fan = build_surface_fan(poly, origin)
    ray_pm = []
    for v in fan.rays:
        p = (v[0] + origin[0], v[1] + origin[1])
        pick = report.boundary_matching[p]
        if boundary_choice and p in boundary_choice:
            pick = boundary_choice[p]
            if pick not in report.boundary_matchings[p]:
                raise ValueError(f"matching {pick} does not have class {p}")
        ray_pm.append(pick)
    q = quiver_of(model)
    base = q.vertices[0]
    bundles = {}
    if paths == "tree":
        for v in q.vertices:
            _, rel = tree_walk(model, v)
            bundles[v] = tuple(rel[i] - rel[d0.id] for i in ray_pm)
    elif paths == "directed":
        routes = _directed_paths_from(model, base)
        for v in q.vertices:
            path = make_path(model, routes[v], source=base)
            w0 = path_weight(model, path, d0)
            bundles[v] = tuple(path_weight(model, path, pms[i]) - w0 for i in ray_pm)
    else:
        raise ValueError(f"unknown path choice {paths!r}")
    base_coeffs = bundles[base]
    normal = {
        v: divisor_class_normal_form(fan, tuple(a - b for a, b in zip(c, base_coeffs)))
        for v, c in bundles.items()
    }
    return Collection(fan, normal, d0.id, base, origin, tuple(ray_pm))


def perturb_collection(collection: Collection, vertex: int, ray: int, delta: int = 1) -> Collection:
    """Copy with one coefficient of one bundle shifted (for negative tests)."""
    coeffs = list(collection.bundles[vertex].coefficients)
    coeffs[ray] += delta
    bundles = dict(collection.bundles)
    bundles[vertex] = divisor_class_normal_form(collection.fan, coeffs)
    return replace(collection, bundles=bundles)


# ---------------------------------------------------------------------------
# verification


@dataclass
class PairFailure:
    source: int
    target: int
    degree: int
    rank: int
    support: tuple


@dataclass
class VerificationReport:
    hom: dict[tuple[int, int], int]
    ext1: dict[tuple[int, int], int]
    ext2: dict[tuple[int, int], int]
    order: list[int]
    reasons: list[str] = field(default_factory=list)
    failures: list[PairFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.reasons

    def to_dict(self) -> dict:
        def table(t):
            return [[v, w, r] for (v, w), r in sorted(t.items())]

        return {
            "passed": self.passed,
            "order": self.order,
            "reasons": self.reasons,
            "hom": table(self.hom),
            "ext1": table(self.ext1),
            "ext2": table(self.ext2),
            "failures": [
                {"source": f.source, "target": f.target, "degree": f.degree, "rank": f.rank,
                 "support": [[list(m), r] for m, r in f.support]}
                for f in self.failures
            ],
        }


def pair_cohomology(collection: Collection) -> dict[tuple[int, int], CohomologyTable]:
    verts = collection.vertices
    cache: dict[tuple[int, ...], CohomologyTable] = {}
    out = {}
    for v in verts:
        for w in verts:
            d = collection.difference(v, w)
            if d not in cache:
                cache[d] = cohomology_surface(collection.fan, d)
            out[(v, w)] = cache[d]
    return out


def _topological_order(verts, edges, key) -> list[int] | None:
    indeg = {v: 0 for v in verts}
    for v, w in edges:
        indeg[w] += 1
    ready = sorted((v for v in verts if indeg[v] == 0), key=key)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for a, b in edges:
            if a == v:
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
        ready.sort(key=key)
    return order if len(order) == len(verts) else None


def verify_strong_exceptional(collection: Collection) -> VerificationReport:
    coh = pair_cohomology(collection)
    verts = collection.vertices
    hom = {k: t.h0 for k, t in coh.items()}
    ext1 = {k: t.h1 for k, t in coh.items()}
    ext2 = {k: t.h2 for k, t in coh.items()}
    reasons: list[str] = []
    failures: list[PairFailure] = []
    classes = {}
    for v in verts:
        nf = collection.bundles[v].normal_form
        if nf in classes:
            reasons.append(f"not pairwise distinct: bundles at {classes[nf]} and {v} are isomorphic")
        classes.setdefault(nf, v)
    for (v, w), t in sorted(coh.items()):
        if v == w and t.h0 != 1:
            reasons.append(f"End of bundle {v} has dimension {t.h0}, expected 1")
        for p in (1, 2):
            if t.ranks[p]:
                reasons.append(f"Ext^{p}({v}, {w}) has rank {t.ranks[p]}")
                failures.append(PairFailure(v, w, p, t.ranks[p], t.supports[p]))
    edges = [(v, w) for (v, w), h in hom.items() if v != w and h]
    order = _topological_order(verts, edges, key=lambda v: (collection.bundles[v].normal_form, v))
    if order is None:
        reasons.append("Hom between distinct bundles has a directed cycle; no exceptional order")
        order = []
    return VerificationReport(hom, ext1, ext2, order, reasons, failures)


@dataclass
class CrossCheckReport:
    path_table: HomDimTable
    toric_table: HomDimTable
    mismatches: list[tuple[int, int, int, int]]  # (v, w, path side, toric side)

    @property
    def equal(self) -> bool:
        return not self.mismatches

    @property
    def first_mismatch(self) -> tuple[int, int, int, int] | None:
        return self.mismatches[0] if self.mismatches else None

    def to_dict(self) -> dict:
        return {
            "equal": self.equal,
            "path_total": self.path_table.total,
            "toric_total": self.toric_table.total,
            "vertices": list(self.path_table.vertices),
            "path_table": self.path_table.rows(),
            "toric_table": self.toric_table.rows(),
            "mismatches": [list(m) for m in self.mismatches],
        }


def toric_hom_table(collection: Collection) -> HomDimTable:
    coh = pair_cohomology(collection)
    return HomDimTable(collection.vertices, {k: t.h0 for k, t in coh.items()})


def cross_check_endomorphism_algebra(
    model: DimerModel, d0: PerfectMatching | int, collection: Collection
) -> CrossCheckReport:
    """Compare path-quotient dimensions with sections of E_v^* (x) E_w, pair by pair."""
    d0 = enumerate_matchings(model)[d0] if isinstance(d0, int) else d0
    path_side = quotient_hom_dims(model, d0)
    toric_side = toric_hom_table(collection)
    mismatches = [
        (v, w, path_side[(v, w)], toric_side[(v, w)])
        for v in path_side.vertices
        for w in path_side.vertices
        if path_side[(v, w)] != toric_side[(v, w)]
    ]
    return CrossCheckReport(path_side, toric_side, mismatches)


def fullness_rank_check(collection: Collection, model: DimerModel) -> bool:
    """#bundles = #faces = normalized area of the polygon."""
    n = len(collection.bundles)
    return n == len(compute_faces(model)) == characteristic_polygon(model).twice_area


def cycle_weight_relations(model: DimerModel, collection: Collection) -> list[tuple[str, bool]]:
    """For each tree chord: does its fundamental cycle shift the bundle by <lift, v_i>?

    The weight changes ``w_{D_i} - w_{D_0}`` around the cycle must equal
    ``<lift, v_i>`` for the cycle's lift.
    """
    q = quiver_of(model)
    tree = set(spanning_tree(model))
    pms = enumerate_matchings(model)
    out = []
    for aid in q.arrows:
        if aid in tree:
            continue
        a = q.arrows[aid]
        ls, ws = tree_walk(model, a.source)
        lt, wt = tree_walk(model, a.target)
        lift = (ls[0] + a.lift[0] - lt[0], ls[1] + a.lift[1] - lt[1])
        ok = True
        for i, v in zip(collection.ray_matchings, collection.fan.rays):
            def rel(pm_id):
                step = (aid in pms[pm_id].edges) - (aid in pms[0].edges)
                return ws[pm_id] + step - wt[pm_id]

            if rel(i) - rel(collection.d0) != lift[0] * v[0] + lift[1] * v[1]:
                ok = False
        out.append((aid, ok))
    return out
