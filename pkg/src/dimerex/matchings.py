"""Perfect matchings, their lattice classes, and the characteristic polygon."""
from __future__ import annotations

from collections import Counter
from math import comb
from dataclasses import dataclass
from functools import lru_cache

from . import lattice
from .dimer import DimerModel, EdgeId, natural_key, vadd, vneg

Vec2 = tuple[int, int]


class NoMatchingError(ValueError):
    pass


class DegeneratePolygonError(ValueError):
    pass


class NoCentralCandidateError(ValueError):
    pass


class BoundaryMultiplicityError(ValueError):
    """A boundary lattice point is unoccupied, or a corner has multiplicity != 1."""


@dataclass(frozen=True)
class PerfectMatching:
    id: int
    edges: frozenset[EdgeId]

    def sorted_edges(self) -> tuple[EdgeId, ...]:
        return tuple(sorted(self.edges, key=natural_key))

    def __contains__(self, eid: EdgeId) -> bool:
        return eid in self.edges


@lru_cache(maxsize=64)
def enumerate_matchings(model: DimerModel) -> tuple[PerfectMatching, ...]:
    """All perfect matchings by backtracking over black nodes.

    Ordered lexicographically by their sorted edge-id tuples (natural order
    on ids); the position in that order is the matching id.
    """
    if len(model.blacks) != len(model.whites):
        raise NoMatchingError(
            f"|B| = {len(model.blacks)} != |W| = {len(model.whites)}: no perfect matching"
        )
    blacks = sorted(model.blacks, key=natural_key)
    star = {b: sorted(model.cyclic_order[b], key=natural_key) for b in blacks}
    found: list[tuple[EdgeId, ...]] = []
    used_white: set[str] = set()
    chosen: list[EdgeId] = []

    def rec(i: int) -> None:
        if i == len(blacks):
            found.append(tuple(sorted(chosen, key=natural_key)))
            return
        for eid in star[blacks[i]]:
            w = model.edge[eid].white
            if w in used_white:
                continue
            used_white.add(w)
            chosen.append(eid)
            rec(i + 1)
            chosen.pop()
            used_white.discard(w)

    rec(0)
    found.sort(key=lambda t: [natural_key(e) for e in t])
    return tuple(PerfectMatching(i, frozenset(t)) for i, t in enumerate(found))


def is_perfect_matching(model: DimerModel, edges) -> bool:
    cover = Counter()
    for eid in edges:
        e = model.edge[eid]
        cover[e.black] += 1
        cover[e.white] += 1
    return all(cover[n] == 1 for n in model.nodes) and len(cover) == len(model.nodes)


def rotate_minus_90(v: Vec2) -> Vec2:
    return (v[1], -v[0])


def matching_class(model: DimerModel, pm: PerfectMatching, ref: PerfectMatching) -> Vec2:
    """Homology of ``pm - ref`` rotated by -90 degrees.

    ``pm`` edges run white to black, ``ref`` edges black to white.  With this
    convention the weight difference of the two matchings on any closed
    quiver walk with lift ``h`` equals ``<h, class>``.
    """
    total = (0, 0)
    for eid in pm.edges - ref.edges:
        total = vadd(total, vneg(model.edge[eid].shift))
    for eid in ref.edges - pm.edges:
        total = vadd(total, model.edge[eid].shift)
    return rotate_minus_90(total)


@dataclass(frozen=True)
class Polygon:
    # occupied lattice points and how many matchings sit on each
    multiplicity: dict[Vec2, int]
    vertices: tuple[Vec2, ...]
    boundary_points: tuple[Vec2, ...]
    interior_points: tuple[Vec2, ...]
    # class of every matching, indexed by matching id
    classes: tuple[Vec2, ...]

    def __hash__(self) -> int:
        return hash((self.vertices, self.classes))

    @property
    def twice_area(self) -> int:
        return lattice.twice_area(self.vertices)

    def location(self, p: Vec2) -> str:
        return lattice.point_location(self.vertices, p)


@lru_cache(maxsize=64)
def characteristic_polygon(model: DimerModel) -> Polygon:
    pms = enumerate_matchings(model)
    if not pms:
        raise DegeneratePolygonError("model has no perfect matchings")
    ref = pms[0]
    classes = tuple(matching_class(model, pm, ref) for pm in pms)
    mult = dict(sorted(Counter(classes).items()))
    hull = lattice.convex_hull(mult)
    if len(hull) < 3:
        raise DegeneratePolygonError(f"matching classes are collinear: {sorted(mult)}")
    boundary = lattice.boundary_lattice_points(hull)
    inside = [
        p for p in lattice.lattice_points_in_polygon(hull) if lattice.point_location(hull, p) == "interior"
    ]
    return Polygon(mult, tuple(hull), tuple(boundary), tuple(sorted(inside)), classes)


def binomial_boundary(poly: Polygon) -> bool:
    """Multiplicities along every edge of lattice length n are C(n, 0), ..., C(n, n)."""
    hull = poly.vertices
    for k in range(len(hull)):
        pts = lattice.edge_lattice_points(hull[k], hull[(k + 1) % len(hull)])
        n = len(pts) - 1
        if [poly.multiplicity.get(p, 0) for p in pts] != [comb(n, j) for j in range(n + 1)]:
            return False
    return True


@dataclass
class ClassificationReport:
    labels: dict[int, str]  # matching id -> corner / boundary / interior
    origin: Vec2
    central_candidates: list[int]
    boundary_multiplicity: dict[Vec2, int]
    # boundary lattice point -> all matchings with that class, and the default pick
    boundary_matchings: dict[Vec2, list[int]]
    boundary_matching: dict[Vec2, int]
    binomial_boundary: bool


def classify_matchings(model: DimerModel, origin: Vec2 | None = None) -> ClassificationReport:
    """Label matchings and pick the central candidates at ``origin``.

    ``origin`` defaults to the unique occupied interior lattice point.
    Every boundary lattice point must be occupied and every corner must
    carry exactly one matching.  A non-corner boundary point may carry
    several; the one with the smallest id is the default representative.
    """
    poly = characteristic_polygon(model)
    corners = set(poly.vertices)
    labels = {}
    for pm_id, c in enumerate(poly.classes):
        loc = poly.location(c)
        labels[pm_id] = "corner" if c in corners else ("boundary" if loc == "boundary" else "interior")
    occupied_interior = [p for p in poly.interior_points if poly.multiplicity.get(p)]
    if origin is None:
        if not occupied_interior:
            raise NoCentralCandidateError("no central candidate: polygon has no occupied interior point")
        if len(occupied_interior) > 1:
            raise NoCentralCandidateError(
                f"several interior lattice points {occupied_interior}; choose one as the origin"
            )
        origin = occupied_interior[0]
    origin = tuple(origin)
    if origin not in occupied_interior:
        raise NoCentralCandidateError(f"no central candidate: {origin} is not an occupied interior point")
    bmult = {p: poly.multiplicity.get(p, 0) for p in poly.boundary_points}
    empty = [p for p, m in bmult.items() if m == 0]
    if empty:
        raise BoundaryMultiplicityError(f"boundary lattice points without a matching: {empty}")
    bad = {p: bmult[p] for p in poly.vertices if bmult[p] != 1}
    if bad:
        raise BoundaryMultiplicityError(f"corners with multiplicity != 1: {bad}")
    bmatches: dict[Vec2, list[int]] = {p: [] for p in poly.boundary_points}
    for i, c in enumerate(poly.classes):
        if c in bmatches:
            bmatches[c].append(i)
    central = [i for i, c in enumerate(poly.classes) if c == origin]
    return ClassificationReport(
        labels,
        origin,
        central,
        bmult,
        bmatches,
        {p: ids[0] for p, ids in bmatches.items()},
        binomial_boundary(poly),
    )
