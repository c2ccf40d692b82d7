"""Small cycles, the superpotential W, the quotient by (W), and the curved diagram.

A class is treated as divisible by the small cycle when it has weight at
least one under every perfect matching; the small cycle has weight exactly
one under every matching and weights are class invariants.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .dimer import DimerModel, EdgeId, natural_key, quiver_of
from .matchings import enumerate_matchings
from .paths import (
    InvariantViolation,
    Path,
    PathClass,
    _context,
    class_weight,
    enumerate_paths,
    path_class,
)


@dataclass(frozen=True)
class SmallCycle:
    vertex: int
    arrow: EdgeId  # the arrow the representative starts with
    path: Path
    cls: PathClass


def small_cycle_path(model: DimerModel, arrow: EdgeId) -> Path:
    """The arrow followed by the rest of the face around its white node."""
    q = quiver_of(model)
    p_plus, _ = q.relations[arrow]
    return Path(q.arrows[arrow].source, (arrow,) + p_plus)


def small_cycle(model: DimerModel, v: int) -> SmallCycle:
    q = quiver_of(model)
    outs = q.out_arrows.get(v, ())
    if not outs:
        raise ValueError(f"vertex {v} has no outgoing arrow")
    first = min(outs, key=natural_key)
    path = small_cycle_path(model, first)
    cls = path_class(model, path)
    for a in outs:
        other = path_class(model, small_cycle_path(model, a))
        if other != cls:
            raise InvariantViolation(
                f"small cycles at {v} through arrows {first} and {a} differ: {cls} vs {other}"
            )
    return SmallCycle(v, first, path, cls)


def arrow_class(model: DimerModel, arrow: EdgeId) -> PathClass:
    q = quiver_of(model)
    return path_class(model, Path(q.arrows[arrow].source, (arrow,)))


@dataclass
class CentralityReport:
    failures: list[EdgeId]

    @property
    def passed(self) -> bool:
        return not self.failures


def superpotential_centrality(model: DimerModel) -> CentralityReport:
    """For each arrow a: a followed by the small cycle at t(a) equals the small cycle at s(a) followed by a."""
    q = quiver_of(model)
    omega = {v: small_cycle(model, v).cls for v in q.vertices}
    bad = []
    for aid, a in q.arrows.items():
        c = arrow_class(model, aid)
        if c.then(omega[a.target]) != omega[a.source].then(c):
            bad.append(aid)
    return CentralityReport(bad)


def omega_divisible(model: DimerModel, cls: PathClass) -> bool:
    return all(class_weight(model, cls, pm) >= 1 for pm in enumerate_matchings(model))


def _weight_sum(model, cls) -> int:
    return sum(class_weight(model, cls, pm) for pm in enumerate_matchings(model))


def _candidate(model: DimerModel, i: int, j: int, lift) -> PathClass:
    """The unique class i -> j with the given lift and minimal weight zero."""
    ctx = _context(model)
    r = -min(
        lift[0] * k[0] + lift[1] * k[1] + ctx.phi[n][j] - ctx.phi[n][i]
        for n, k in enumerate(ctx.classes)
    )
    return PathClass(i, j, tuple(lift), r)


def a0_classes(model: DimerModel, i: int, lift_bound: int) -> set[PathClass]:
    """Non-divisible classes out of ``i`` with sup-norm of the lift <= lift_bound.

    Extending a path never lowers a weight, so prefixes of non-divisible
    paths are non-divisible, and the total weight over all matchings grows
    by at least one per arrow.  The search is therefore cut off at the
    largest total weight any admissible target class can have.
    """
    q = quiver_of(model)
    box = range(-lift_bound, lift_bound + 1)
    cap = max(_weight_sum(model, _candidate(model, i, j, (x, y))) for j in q.vertices for x in box for y in box)
    arrows = {aid: arrow_class(model, aid) for aid in q.arrows}
    start = PathClass(i, i, (0, 0), 0)
    seen = {start}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for aid in q.out_arrows[c.target]:
            nxt = c.then(arrows[aid])
            if nxt in seen or omega_divisible(model, nxt) or _weight_sum(model, nxt) > cap:
                continue
            seen.add(nxt)
            queue.append(nxt)
    return {c for c in seen if max(abs(c.lift[0]), abs(c.lift[1])) <= lift_bound}


def a0_dim_truncated(model: DimerModel, i: int, j: int, lift_bound: int) -> int:
    return sum(1 for c in a0_classes(model, i, lift_bound) if c.target == j)


# ---------------------------------------------------------------------------
# curved diagram
#
# Paths are written in traversal order (first arrow first).


@dataclass
class CurvedAlgebra:
    name: str
    vertices: list[str]
    arrows: dict[str, tuple[str, str]]  # arrow -> (source, target)
    curvature: list[tuple[str, ...]]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "vertices": self.vertices,
            "arrows": {a: list(st) for a, st in self.arrows.items()},
            "curvature": [list(t) for t in self.curvature],
        }


@dataclass
class CurvedMorphism:
    edge: EdgeId
    node: str
    images: dict[str, tuple[str, ...]]

    def to_dict(self) -> dict:
        return {"edge": self.edge, "node": self.node, "images": {k: list(v) for k, v in self.images.items()}}


@dataclass
class CurvedDiagram:
    edges: dict[EdgeId, CurvedAlgebra]
    nodes: dict[str, CurvedAlgebra]
    morphisms: list[CurvedMorphism]
    problems: list[str] = field(default_factory=list)

    @property
    def well_formed(self) -> bool:
        return not self.problems

    def to_dict(self) -> dict:
        return {
            "edges": [a.to_dict() for a in self.edges.values()],
            "nodes": [a.to_dict() for a in self.nodes.values()],
            "morphisms": [m.to_dict() for m in self.morphisms],
            "well_formed": self.well_formed,
            "problems": self.problems,
        }


def _edge_algebra(e: EdgeId) -> CurvedAlgebra:
    s, t, a, p = f"s_{e}", f"t_{e}", f"a_{e}", f"p_{e}"
    # a_e . p_e is the cycle at t_e, p_e . a_e the cycle at s_e
    return CurvedAlgebra(f"F({e})", [s, t], {a: (s, t), p: (t, s)}, [(p, a), (a, p)])


def node_edge_cycle(model: DimerModel, node: str) -> list[EdgeId]:
    """Edges at ``node``: clockwise at black, counterclockwise at white, from the smallest id."""
    order = list(model.cyclic_order[node])
    if model.is_black(node):
        order.reverse()
    k = order.index(min(order, key=natural_key))
    return order[k:] + order[:k]


def _node_algebra(model: DimerModel, node: str) -> CurvedAlgebra:
    es = node_edge_cycle(model, node)
    n = len(es)
    arrows = {f"a_{e}": (f"s_{e}", f"s_{es[(i + 1) % n]}") for i, e in enumerate(es)}
    # term i traverses e_i, e_{i+1}, ..., e_{i-1}
    terms = [tuple(f"a_{es[(i + k) % n]}" for k in range(n)) for i in range(n)]
    return CurvedAlgebra(f"F({node})", [f"s_{e}" for e in es], arrows, terms)


def _path_ends(alg: CurvedAlgebra, path: tuple[str, ...]) -> tuple[str, str] | None:
    for x, y in zip(path, path[1:]):
        if alg.arrows[x][1] != alg.arrows[y][0]:
            return None
    return alg.arrows[path[0]][0], alg.arrows[path[-1]][1]


def curved_diagram(model: DimerModel) -> CurvedDiagram:
    edges = {e.id: _edge_algebra(e.id) for e in model.edges}
    nodes = {n: _node_algebra(model, n) for n in model.nodes}
    morphisms = []
    problems = []
    for n in model.nodes:
        es = node_edge_cycle(model, n)
        k = len(es)
        target = nodes[n]
        for i, e in enumerate(es):
            rest = tuple(f"a_{es[(i + j) % k]}" for j in range(1, k))
            images = {f"a_{e}": (f"a_{e}",), f"p_{e}": rest}
            morphisms.append(CurvedMorphism(e, n, images))
            src = edges[e]
            # vertex map: s_e -> s_e, t_e -> the target of a_e in F(n)
            vmap = {f"s_{e}": f"s_{e}", f"t_{e}": target.arrows[f"a_{e}"][1]}
            for arrow, img in images.items():
                ends = _path_ends(target, img)
                s, t = src.arrows[arrow]
                if ends != (vmap[s], vmap[t]):
                    problems.append(f"image of {arrow} in F({n}) does not run {vmap[s]} -> {vmap[t]}")
            w_img = sorted(
                sum((images[x] for x in term), ()) for term in src.curvature
            )
            w_terms = sorted(t for t in target.curvature if f"a_{e}" in (t[0], t[-1]))
            if w_img != w_terms:
                problems.append(f"image of W_{e} is not the pair of W_{n} terms through a_{e}")
    morphisms.sort(key=lambda m: (natural_key(m.node), natural_key(m.edge)))
    return CurvedDiagram(edges, nodes, morphisms, problems)


def brute_force_a0(model: DimerModel, i: int, j: int, lift_bound: int, max_len: int) -> set[PathClass]:
    """Oracle: classes of all paths i -> j up to max_len, non-divisible, lift in the box."""
    out = set()
    for p in enumerate_paths(model, max_len, source=i):
        c = path_class(model, p)
        if c.target == j and max(map(abs, c.lift)) <= lift_bound and not omega_divisible(model, c):
            out.add(c)
    return out
