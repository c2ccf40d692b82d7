"""Line bundles on the toric surface stack of a polygon and on its canonical bundle.

Equivariant cohomology is computed character by character: for a
character m the twisted coefficients ``a_i + <m, v_i>`` give a cyclic
sign sequence (``+`` for >= 0), and each degree's rank is read off the
sign pattern.  Rather than scanning characters, we loop over sign
patterns with a nonzero contribution and enumerate the lattice points of
the rational polyhedron cut out by that pattern.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from . import lattice
from .lattice import Polyhedron, UnboundedPolyhedronError, Vec2

Coeffs = tuple[int, ...]


class FanError(ValueError):
    pass


def sgn(a: int) -> str:
    return "+" if a >= 0 else "-"


def signs(values: Iterable[int]) -> str:
    return "".join(sgn(a) for a in values)


def cyclic_minus_intervals(pattern: str) -> int:
    """Number of maximal cyclic runs of '-'; an all-'-' pattern counts as one."""
    if "-" not in pattern:
        return 0
    if "+" not in pattern:
        return 1
    n = len(pattern)
    return sum(1 for i in range(n) if pattern[i] == "-" and pattern[i - 1] == "+")


def linear_minus_runs(pattern: str) -> int:
    return sum(1 for i, s in enumerate(pattern) if s == "-" and (i == 0 or pattern[i - 1] == "+"))


# ---------------------------------------------------------------------------
# fans


@dataclass(frozen=True)
class StackyFan2:
    """Complete fan whose rays are the boundary lattice points of a polygon around 0."""

    rays: tuple[Vec2, ...]

    def __post_init__(self):
        rays = self.rays
        if len(rays) < 3:
            raise FanError("a complete fan needs at least 3 rays")
        hull = lattice.convex_hull(rays)
        if len(hull) < 3 or lattice.point_location(hull, (0, 0)) != "interior":
            raise FanError("the origin is not strictly inside the ray polygon")
        for v in rays:
            if lattice.point_location(hull, v) != "boundary":
                raise FanError(f"ray {v} is not on the boundary of the ray polygon")
        # strictly increasing angle, cyclically: consecutive rays turn left by < 180 degrees
        n = len(rays)
        turn = sum(1 for i in range(n) if lattice.det2(rays[i], rays[(i + 1) % n]) > 0)
        if turn != n or len(set(rays)) != n:
            raise FanError("rays are not strictly counterclockwise")
        keys = [lattice.angle_key(v) for v in rays]
        start = min(range(n), key=lambda i: keys[i])
        ordered = [keys[(start + i) % n] for i in range(n)]
        if any(not (ordered[i] < ordered[i + 1]) for i in range(n - 1)):
            raise FanError("rays wind around the origin more than once")

    def __len__(self) -> int:
        return len(self.rays)

    @cached_property
    def polygon(self) -> tuple[Vec2, ...]:
        return tuple(lattice.convex_hull(self.rays))

    @cached_property
    def boundary_segments(self) -> tuple[tuple[int, ...], ...]:
        """Ray indices on each edge of the ray polygon, in counterclockwise order."""
        hull = self.polygon
        pos = {v: i for i, v in enumerate(self.rays)}
        segs = []
        for k in range(len(hull)):
            pts = lattice.edge_lattice_points(hull[k], hull[(k + 1) % len(hull)])
            segs.append(tuple(pos[p] for p in pts))
        return tuple(segs)

    @cached_property
    def class_lattice(self) -> list[list[int]]:
        """HNF basis of the principal divisors ``(<m, v_i>)_i``."""
        return lattice.hermite_normal_form(
            [[v[0] for v in self.rays], [v[1] for v in self.rays]]
        )

    def principal(self, m: Sequence[int]) -> Coeffs:
        return tuple(m[0] * v[0] + m[1] * v[1] for v in self.rays)

    @property
    def anticanonical(self) -> Coeffs:
        return (1,) * len(self.rays)


@dataclass(frozen=True)
class StackyFan3:
    """Fan of the canonical bundle: rays (0,0,1) and (v_i, 1)."""

    base: StackyFan2

    @property
    def rays(self) -> tuple[tuple[int, int, int], ...]:
        return ((0, 0, 1),) + tuple((v[0], v[1], 1) for v in self.base.rays)

    def __len__(self) -> int:
        return len(self.base.rays)


def build_surface_fan(polygon, origin: Vec2) -> StackyFan2:
    """Fan on all boundary lattice points of ``polygon`` (hull vertices or a Polygon)."""
    vertices = polygon.vertices if hasattr(polygon, "vertices") else tuple(polygon)
    if lattice.point_location(vertices, tuple(origin)) != "interior":
        raise FanError(f"origin {tuple(origin)} is not an interior point of the polygon")
    rays = [(p[0] - origin[0], p[1] - origin[1]) for p in lattice.boundary_lattice_points(vertices)]
    # start at the first ray in angular order from the positive x axis
    start = min(range(len(rays)), key=lambda i: lattice.angle_key(rays[i]))
    return StackyFan2(tuple(rays[start:] + rays[:start]))


def an_strip_rays(n: int) -> tuple[Vec2, ...]:
    return tuple((i, 1) for i in range(n + 1))


# ---------------------------------------------------------------------------
# divisor classes


@dataclass(frozen=True)
class DivisorClass:
    coefficients: Coeffs
    normal_form: Coeffs = field(compare=False)

    def __eq__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.normal_form == other.normal_form

    def __hash__(self):
        return hash(self.normal_form)


def divisor_class_normal_form(fan: StackyFan2, coefficients: Sequence[int]) -> DivisorClass:
    coeffs = tuple(int(a) for a in coefficients)
    if len(coeffs) != len(fan.rays):
        raise ValueError(f"expected {len(fan.rays)} coefficients, got {len(coeffs)}")
    return DivisorClass(coeffs, lattice.reduce_mod_hnf(coeffs, fan.class_lattice))


def dual_coefficients(coeffs: Sequence[int]) -> Coeffs:
    """Coefficients of ``-D - sum D_i``, the Serre-dual twist on the surface."""
    return tuple(-a - 1 for a in coeffs)


# ---------------------------------------------------------------------------
# sign pattern polyhedra


def _pattern_constraints(rays, coeffs, pattern: str):
    cons = []
    for v, a, s in zip(rays, coeffs, pattern):
        if s == "+":
            cons.append((tuple(v), a))
        else:
            cons.append((tuple(-x for x in v), -a - 1))
    return cons


def _rays_for(fan) -> tuple[tuple[int, ...], ...]:
    if isinstance(fan, StackyFan3):
        return fan.rays
    if isinstance(fan, StackyFan2):
        return fan.rays
    return tuple(tuple(v) for v in fan)


def pattern_polyhedron(fan, pattern: str, coefficients: Sequence[int]) -> Polyhedron:
    rays = _rays_for(fan)
    if len(pattern) != len(rays) or len(coefficients) != len(rays):
        raise ValueError("pattern, coefficients and rays differ in length")
    return Polyhedron(_pattern_constraints(rays, coefficients, pattern), len(rays[0]))


def lattice_points_of_sign_pattern(fan, pattern: str, coefficients: Sequence[int]) -> list[tuple[int, ...]]:
    """Characters whose twisted coefficients have exactly the given signs.

    For a StackyFan3 the pattern and coefficients start with the apex entry.
    Raises UnboundedPolyhedronError when the set is infinite.
    """
    return pattern_polyhedron(fan, pattern, coefficients).lattice_points()


# ---------------------------------------------------------------------------
# cohomology


@dataclass
class CohomologyTable:
    ranks: tuple[int, int, int]
    # per degree: sorted ((character, rank), ...) with rank > 0
    supports: tuple[tuple[tuple[tuple[int, ...], int], ...], ...]
    h0_infinite: bool = False
    # 3-fold only: constraints describing the h0 support, and a truncated listing
    h0_inequalities: tuple = ()
    h0_truncation: int | None = None

    @property
    def h0(self) -> int:
        return self.ranks[0]

    @property
    def h1(self) -> int:
        return self.ranks[1]

    @property
    def h2(self) -> int:
        return self.ranks[2]

    @property
    def higher_vanish(self) -> bool:
        return self.ranks[1] == 0 and self.ranks[2] == 0

    def to_dict(self) -> dict:
        out = {
            "h0": None if self.h0_infinite else self.ranks[0],
            "h1": self.ranks[1],
            "h2": self.ranks[2],
            "support": {
                f"h{p}": [[list(m), r] for m, r in s] for p, s in enumerate(self.supports)
            },
        }
        if self.h0_infinite:
            out["h0_truncated"] = self.ranks[0]
            out["h0_truncation"] = self.h0_truncation
            out["h0_inequalities"] = [[list(c), b] for c, b in self.h0_inequalities]
        return out


def surface_contribution(pattern: str) -> tuple[int, int, int]:
    """(h0, h1, h2) contributed by one character with the given cyclic signs."""
    if "-" not in pattern:
        return (1, 0, 0)
    if "+" not in pattern:
        return (0, 0, 1)
    return (0, cyclic_minus_intervals(pattern) - 1, 0)


def canonical3_contribution(pattern: str) -> tuple[int, int, int]:
    """Same for the canonical bundle; ``pattern[0]`` is the apex sign."""
    apex, cyc = pattern[0], pattern[1:]
    h0 = 1 if apex == "+" and "-" not in cyc else 0
    h2 = 1 if apex == "+" and "+" not in cyc else 0
    if apex == "-" or "-" not in cyc:
        h1 = 0
    else:
        h1 = cyclic_minus_intervals(cyc) - 1
    return (h0, h1, h2)


def _collect(fan, coeffs, patterns_by_degree) -> tuple[list[int], list[list]]:
    totals = [0, 0, 0]
    supports: list[list] = [[], [], []]
    for pattern, contrib in patterns_by_degree:
        pts = lattice_points_of_sign_pattern(fan, pattern, coeffs)
        for p, r in enumerate(contrib):
            if r and pts:
                totals[p] += r * len(pts)
                supports[p].extend((m, r) for m in pts)
    return totals, supports


def _coeffs(fan: StackyFan2, D) -> Coeffs:
    if isinstance(D, DivisorClass):
        return D.coefficients
    coeffs = tuple(int(a) for a in D)
    if len(coeffs) != len(fan.rays):
        raise ValueError(f"expected {len(fan.rays)} coefficients, got {len(coeffs)}")
    return coeffs


def cohomology_surface(fan: StackyFan2, D) -> CohomologyTable:
    coeffs = _coeffs(fan, D)
    work = []
    for bits in product("+-", repeat=len(fan.rays)):
        pattern = "".join(bits)
        contrib = surface_contribution(pattern)
        if any(contrib):
            work.append((pattern, contrib))
    totals, supports = _collect(fan, coeffs, work)
    return CohomologyTable(tuple(totals), tuple(tuple(sorted(s)) for s in supports))


def cohomology_canonical3(fan: StackyFan3 | StackyFan2, coefficients: Sequence[int], h0_truncation: int = 2) -> CohomologyTable:
    """Cohomology of O(a_0 D_0 + sum a_i D_i) on the canonical bundle stack.

    h1 and h2 are exact.  h0 is infinite; its support is returned as the
    defining inequalities, and ``ranks[0]`` counts only the characters with
    ``a_0 + m_3 <= h0_truncation``.  Raises UnboundedPolyhedronError if some
    h1 pattern has infinitely many characters.
    """
    if isinstance(fan, StackyFan2):
        fan = StackyFan3(fan)
    coeffs = tuple(int(a) for a in coefficients)
    if len(coeffs) != len(fan.rays):
        raise ValueError(f"expected {len(fan.rays)} coefficients (a_0 first), got {len(coeffs)}")
    work = []
    for bits in product("+-", repeat=len(fan.base.rays)):
        pattern = "+" + "".join(bits)
        h0, h1, h2 = canonical3_contribution(pattern)
        if h1 or h2:
            work.append((pattern, (0, h1, h2)))
    totals, supports = _collect(fan, coeffs, work)
    h0_cons = tuple(_pattern_constraints(fan.rays, coeffs, "+" * len(fan.rays)))
    capped = Polyhedron(h0_cons + (((0, 0, -1), h0_truncation - coeffs[0]),), 3)
    h0_pts = capped.lattice_points()
    totals[0] = len(h0_pts)
    supports[0] = [(m, 1) for m in h0_pts]
    return CohomologyTable(
        tuple(totals),
        tuple(tuple(sorted(s)) for s in supports),
        h0_infinite=True,
        h0_inequalities=h0_cons,
        h0_truncation=h0_truncation,
    )


# ---------------------------------------------------------------------------
# condition (*) and the A_n strip


@dataclass
class StarReport:
    holds: bool
    # (i, k, j): rays i, j negative on a common boundary edge, k between them non-negative
    witnesses: list[tuple[int, int, int]]


def _surface_part(fan, coefficients) -> tuple[StackyFan2, Coeffs]:
    base = fan.base if isinstance(fan, StackyFan3) else fan
    coeffs = tuple(coefficients)
    if len(coeffs) == len(base.rays) + 1:
        coeffs = coeffs[1:]
    if len(coeffs) != len(base.rays):
        raise ValueError("coefficient vector does not match the fan")
    return base, coeffs


def condition_star(fan, coefficients: Sequence[int]) -> StarReport:
    """Negative signs at two rays of one boundary edge force negative signs between them.

    Accepts either the ray coefficients a_1..a_r or (a_0; a_1..a_r).
    """
    base, a = _surface_part(fan, coefficients)
    witnesses = []
    for seg in base.boundary_segments:
        neg = [t for t, i in enumerate(seg) if a[i] < 0]
        for x in range(len(neg)):
            for y in range(x + 1, len(neg)):
                for t in range(neg[x] + 1, neg[y]):
                    if a[seg[t]] >= 0:
                        witnesses.append((seg[neg[x]], seg[t], seg[neg[y]]))
    witnesses = sorted(set(witnesses))
    return StarReport(not witnesses, witnesses)


def condition_star_all_twists(fan, coefficients: Sequence[int]) -> StarReport:
    """Condition (*) for every twist a_i + <m, v_i> + s with (m, s) in Z^3.

    On a boundary edge the twist restricts to an affine function of the
    position along the edge, so it suffices to run over affine functions
    whose sign can change somewhere on the edge.
    """
    base, a = _surface_part(fan, coefficients)
    witnesses = []
    for seg in base.boundary_segments:
        vals = [a[i] for i in seg]
        n = len(vals)
        if n < 3:
            continue
        # twisted value at position t: vals[t] + alpha * t + beta; sign changes need
        # |alpha| bounded by the spread of vals, beta then bounded too
        spread = max(vals) - min(vals) + 1
        for alpha in range(-spread, spread + 1):
            shifted = [v + alpha * t for t, v in enumerate(vals)]
            for beta in range(-max(shifted) - 1, -min(shifted) + 2):
                tw = [v + beta for v in shifted]
                neg = [t for t in range(n) if tw[t] < 0]
                if len(neg) >= 2 and any(tw[t] >= 0 for t in range(neg[0], neg[-1] + 1)):
                    t = next(t for t in range(neg[0], neg[-1] + 1) if tw[t] >= 0)
                    witnesses.append((seg[neg[0]], seg[t], seg[neg[-1]]))
    witnesses = sorted(set(witnesses))
    return StarReport(not witnesses, witnesses)


@dataclass
class StripCohomology:
    # all-'+' characters are described, not counted: the strip is not complete
    h0_inequalities: tuple
    h1: int
    h1_support: tuple[tuple[Vec2, int], ...]
    h2: int = 0

    @property
    def acyclic(self) -> bool:
        return self.h1 == 0 and self.h2 == 0


def strip_character_h1(values: Sequence[int]) -> int:
    runs = linear_minus_runs(signs(values))
    return max(runs - 1, 0)


def an_strip_cohomology(a: Sequence[int]) -> StripCohomology:
    """Cohomology of sum a_i D_i on the A_n strip fan with rays (i, 1), i = 0..n."""
    a = tuple(int(x) for x in a)
    if not a:
        raise ValueError("need at least one coefficient")
    rays = an_strip_rays(len(a) - 1)
    total = 0
    support = []
    for bits in product("+-", repeat=len(a)):
        pattern = "".join(bits)
        h1 = max(linear_minus_runs(pattern) - 1, 0)
        if not h1:
            continue
        for m in pattern_polyhedron(rays, pattern, a).lattice_points():
            total += h1
            support.append((m, h1))
    h0_cons = tuple(_pattern_constraints(rays, a, "+" * len(a)))
    return StripCohomology(h0_cons, total, tuple(sorted(support)))


def an_strip_sign_rule_holds(a: Sequence[int]) -> bool:
    """Acyclic with negative end coefficients implies every coefficient negative."""
    a = tuple(a)
    if not an_strip_cohomology(a).acyclic or a[0] >= 0 or a[-1] >= 0:
        return True
    return all(x < 0 for x in a)


def an_strip_counterexamples(max_n: int = 3, bound: int = 2) -> list[tuple[int, ...]]:
    out = []
    for n in range(max_n + 1):
        for a in product(range(-bound, bound + 1), repeat=n + 1):
            if not an_strip_sign_rule_holds(a):
                out.append(a)
    return out


__all__ = [
    "FanError",
    "UnboundedPolyhedronError",
    "StackyFan2",
    "StackyFan3",
    "DivisorClass",
    "CohomologyTable",
    "StarReport",
    "StripCohomology",
    "build_surface_fan",
    "divisor_class_normal_form",
    "dual_coefficients",
    "cohomology_surface",
    "cohomology_canonical3",
    "condition_star",
    "condition_star_all_twists",
    "an_strip_cohomology",
    "an_strip_sign_rule_holds",
    "an_strip_counterexamples",
    "lattice_points_of_sign_pattern",
    "sgn",
    "signs",
    "cyclic_minus_intervals",
    "linear_minus_runs",
]
