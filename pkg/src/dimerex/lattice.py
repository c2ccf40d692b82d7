"""Exact integer geometry in dimension <= 3.

Convex hulls of planar point sets, Hermite normal form of integer row
lattices, and lattice-point enumeration of rational polyhedra by
Fourier-Motzkin projection.  Everything is integer or ``Fraction``
arithmetic; nothing here ever touches floats.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec2 = tuple[int, int]


class UnboundedPolyhedronError(ValueError):
    """A polyhedron expected to be bounded has a nonzero recession direction."""


# ---------------------------------------------------------------------------
# planar helpers


def cross(o: Sequence[int], a: Sequence[int], b: Sequence[int]) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def det2(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def _half(v: Sequence[int]) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def angle_key(v: Sequence[int]):
    """Sort key ordering nonzero vectors counterclockwise from the positive x-axis.

    Works for rational entries; used wherever a cyclic order by argument is
    needed without floating point.
    """
    return _AngleKey(v)


class _AngleKey:
    __slots__ = ("v", "h")

    def __init__(self, v):
        if v[0] == 0 and v[1] == 0:
            raise ValueError("zero vector has no angle")
        self.v = v
        self.h = _half(v)

    def __lt__(self, other: "_AngleKey") -> bool:
        if self.h != other.h:
            return self.h < other.h
        return det2(self.v, other.v) > 0

    def __eq__(self, other) -> bool:
        return self.h == other.h and det2(self.v, other.v) == 0


def convex_hull(points: Iterable[Vec2]) -> list[Vec2]:
    """Strict hull vertices in counterclockwise order (monotone chain).

    Collinear boundary points are dropped.  Fewer than three affinely
    independent points give a degenerate list of length < 3.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Vec2] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Vec2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def twice_area(vertices: Sequence[Vec2]) -> int:
    """Twice the Euclidean area (= normalized lattice area) of a ccw polygon."""
    n = len(vertices)
    return sum(det2(vertices[i], vertices[(i + 1) % n]) for i in range(n))


def edge_lattice_points(p: Vec2, q: Vec2) -> list[Vec2]:
    """Lattice points on the segment [p, q], from p to q inclusive."""
    dx, dy = q[0] - p[0], q[1] - p[1]
    g = gcd(dx, dy)
    if g == 0:
        return [p]
    sx, sy = dx // g, dy // g
    return [(p[0] + k * sx, p[1] + k * sy) for k in range(g + 1)]


def boundary_lattice_points(vertices: Sequence[Vec2]) -> list[Vec2]:
    """All lattice points on the boundary of a ccw polygon, in ccw order."""
    out: list[Vec2] = []
    n = len(vertices)
    for i in range(n):
        out.extend(edge_lattice_points(vertices[i], vertices[(i + 1) % n])[:-1])
    return out


def point_location(vertices: Sequence[Vec2], p: Vec2) -> str:
    """'interior', 'boundary' or 'exterior' for a strictly convex ccw polygon."""
    n = len(vertices)
    on_edge = False
    for i in range(n):
        c = cross(vertices[i], vertices[(i + 1) % n], p)
        if c < 0:
            return "exterior"
        if c == 0:
            on_edge = True
    return "boundary" if on_edge else "interior"


def lattice_points_in_polygon(vertices: Sequence[Vec2]) -> list[Vec2]:
    xs = [v[0] for v in vertices]
    ys = [v[1] for v in vertices]
    return [
        (x, y)
        for x in range(min(xs), max(xs) + 1)
        for y in range(min(ys), max(ys) + 1)
        if point_location(vertices, (x, y)) != "exterior"
    ]


# ---------------------------------------------------------------------------
# Hermite normal form


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style HNF of the lattice spanned by ``rows`` (zero rows removed).

    Pivots are positive, strictly increasing in column, and entries above
    each pivot lie in ``[0, pivot)``.
    """
    mat = [list(r) for r in rows]
    if not mat:
        return []
    ncols = len(mat[0])
    out: list[list[int]] = []
    pivot_row = 0
    for col in range(ncols):
        # gather all remaining rows into a single row with gcd at `col`
        pivot = None
        for i in range(pivot_row, len(mat)):
            if mat[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[pivot_row], mat[pivot] = mat[pivot], mat[pivot_row]
        for i in range(pivot_row + 1, len(mat)):
            a, b = mat[pivot_row][col], mat[i][col]
            if b == 0:
                continue
            g, x, y = xgcd(a, b)
            ra, rb = mat[pivot_row], mat[i]
            new_p = [x * u + y * v for u, v in zip(ra, rb)]
            new_i = [(a // g) * v - (b // g) * u for u, v in zip(ra, rb)]
            mat[pivot_row], mat[i] = new_p, new_i
        if mat[pivot_row][col] < 0:
            mat[pivot_row] = [-u for u in mat[pivot_row]]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    out = [r for r in mat[:pivot_row] if any(r)]
    # reduce entries above pivots
    pivots = [next(j for j, u in enumerate(r) if u) for r in out]
    for k, (r, pc) in enumerate(zip(out, pivots)):
        for i in range(k):
            q = out[i][pc] // r[pc]
            if q:
                out[i] = [u - q * v for u, v in zip(out[i], r)]
    return out


def reduce_mod_hnf(vec: Sequence[int], hnf: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Canonical representative of ``vec`` modulo the lattice with basis ``hnf``."""
    v = list(vec)
    for r in hnf:
        pc = next(j for j, u in enumerate(r) if u)
        q = v[pc] // r[pc]
        if q:
            v = [a - q * b for a, b in zip(v, r)]
    return tuple(v)


# ---------------------------------------------------------------------------
# Fourier-Motzkin lattice point enumeration
#
# A constraint (c, b) means  c . x + b >= 0  with integer c, b.

Constraint = tuple[tuple[int, ...], int]


def _eliminate(system: list[Constraint], k: int) -> list[Constraint]:
    pos, neg, out = [], [], []
    for c, b in system:
        if c[k] > 0:
            pos.append((c, b))
        elif c[k] < 0:
            neg.append((c, b))
        else:
            out.append((c, b))
    for cp, bp in pos:
        for cn, bn in neg:
            lp, ln = -cn[k], cp[k]
            c = tuple(lp * x + ln * y for x, y in zip(cp, cn))
            b = lp * bp + ln * bn
            out.append(_rational_normalize(c, b))
    return sorted(set(out))


def _rational_normalize(c: Sequence[int], b: int) -> Constraint:
    # divide by a positive common factor without rounding: projections are
    # real shadows, so the constant must stay exact
    g = 0
    for u in c:
        g = gcd(g, u)
    g = gcd(g, b)
    if g > 1:
        return tuple(u // g for u in c), b // g
    return tuple(c), b


class Polyhedron:
    """``{x in R^d : c.x + b >= 0 for (c, b) in constraints}`` with integer data."""

    def __init__(self, constraints: Iterable[Constraint], dim: int):
        self.dim = dim
        self.constraints = sorted({_rational_normalize(c, b) for c, b in constraints})
        for c, _ in self.constraints:
            if len(c) != dim:
                raise ValueError("constraint of wrong dimension")
        # tower[k] involves only x_0 .. x_{k-1}
        tower = [self.constraints]
        for k in range(dim - 1, -1, -1):
            tower.append(_eliminate(tower[-1], k))
        self._tower = tower[::-1]

    def is_empty(self) -> bool:
        """Real emptiness, decided exactly by the fully projected system."""
        return any(b < 0 for _, b in self._tower[0])

    def recession_is_trivial(self) -> bool:
        """True iff ``{y : c.y >= 0}`` is ``{0}``, i.e. the polyhedron is bounded."""
        hom = [(c, 0) for c, _ in self.constraints]
        for k in range(self.dim):
            # project the recession cone onto coordinate k
            order = [j for j in range(self.dim) if j != k]
            sysk = hom
            for j in reversed(order):
                sysk = _eliminate(sysk, j)
            lower = any(c[k] > 0 for c, _ in sysk)
            upper = any(c[k] < 0 for c, _ in sysk)
            if not (lower and upper):
                return False
        return True

    def lattice_points(self) -> list[tuple[int, ...]]:
        """All integer points, lexicographically sorted.

        Raises UnboundedPolyhedronError for a nonempty unbounded polyhedron.
        """
        if self.is_empty():
            return []
        if not self.recession_is_trivial():
            raise UnboundedPolyhedronError("polyhedron has a nonzero recession direction")
        out: list[tuple[int, ...]] = []
        self._walk((), out)
        return out

    def _walk(self, prefix: tuple[int, ...], out: list) -> None:
        k = len(prefix)
        if k == self.dim:
            out.append(prefix)
            return
        lo: Fraction | None = None
        hi: Fraction | None = None
        for c, b in self._tower[k + 1]:
            rest = b + sum(ci * xi for ci, xi in zip(c, prefix))
            a = c[k]
            if a == 0:
                if rest < 0:
                    return
                continue
            bound = Fraction(-rest, a)
            if a > 0:
                lo = bound if lo is None or bound > lo else lo
            else:
                hi = bound if hi is None or bound < hi else hi
        if lo is None or hi is None:
            raise UnboundedPolyhedronError("unbounded slice during enumeration")
        x = -((-lo.numerator) // lo.denominator)  # ceil
        top = hi.numerator // hi.denominator  # floor
        while x <= top:
            self._walk(prefix + (x,), out)
            x += 1
