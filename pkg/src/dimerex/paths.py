"""Computation in the path algebra of the dimer quiver modulo F-term relations.

Paths are stored in traversal order (first arrow first).  A path's F-term
class is captured by :class:`PathClass`: its endpoints, its lift (total
translation in the universal cover) and its weight under the reference
matching.  The weight under any other matching then follows from the
intersection pairing of the lift with the matching class.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

from .dimer import DimerModel, EdgeId, Quiver, natural_key, quiver_of, vadd, vneg
from .matchings import PerfectMatching, enumerate_matchings, matching_class

Vec2 = tuple[int, int]


class InfiniteDimensionError(ValueError):
    """The quiver with the matching's arrows removed still has a directed cycle."""

    def __init__(self, message: str, witness: tuple[EdgeId, ...]):
        super().__init__(message)
        self.witness = witness


class InvariantViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class Path:
    source: int
    arrows: tuple[EdgeId, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    def target(self, quiver: Quiver) -> int:
        return quiver.arrows[self.arrows[-1]].target if self.arrows else self.source

    def then(self, other: "Path") -> "Path":
        """Concatenation: traverse ``self`` and then ``other``."""
        return Path(self.source, self.arrows + other.arrows)


def make_path(model: DimerModel, arrows, source: int | None = None) -> Path:
    """Build a path from arrow ids, checking that consecutive arrows compose."""
    q = quiver_of(model)
    arrows = tuple(arrows)
    if not arrows:
        if source is None:
            raise ValueError("a length-0 path needs an explicit source vertex")
        return Path(source)
    for a, b in zip(arrows, arrows[1:]):
        if q.arrows[a].target != q.arrows[b].source:
            raise ValueError(f"arrows {a} and {b} do not compose")
    s = q.arrows[arrows[0]].source
    if source is not None and source != s:
        raise ValueError(f"path starts at {s}, not {source}")
    return Path(s, arrows)


@dataclass(frozen=True, order=True)
class PathClass:
    source: int
    target: int
    lift: Vec2
    ref_weight: int

    def then(self, other: "PathClass") -> "PathClass":
        if self.target != other.source:
            raise ValueError("classes do not compose")
        return PathClass(
            self.source, other.target, vadd(self.lift, other.lift), self.ref_weight + other.ref_weight
        )


@dataclass
class _Context:
    model: DimerModel
    quiver: Quiver
    matchings: tuple[PerfectMatching, ...]
    classes: tuple[Vec2, ...]
    # phi[pm_id][v]: weight defect of the tree walk root -> v
    phi: tuple[dict[int, int], ...]
    tree: tuple[EdgeId, ...]
    # tree walk root -> v: (lift, signed weight minus reference weight, per matching)
    walks: dict[int, tuple[Vec2, tuple[int, ...]]]

    @property
    def ref(self) -> PerfectMatching:
        return self.matchings[0]

    @cached_property
    def rewrites(self) -> dict[EdgeId, list[tuple[tuple[EdgeId, ...], tuple[EdgeId, ...]]]]:
        # first arrow -> [(pattern, replacement)]
        idx: dict[EdgeId, list] = {}
        for p_plus, p_minus in self.quiver.relations.values():
            for pat, rep in ((p_plus, p_minus), (p_minus, p_plus)):
                if pat != rep:
                    idx.setdefault(pat[0], []).append((pat, rep))
        return idx


def _spanning_tree(quiver: Quiver) -> tuple[EdgeId, ...]:
    parent = {v: v for v in quiver.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    for aid in sorted(quiver.arrows, key=natural_key):
        a = quiver.arrows[aid]
        ra, rb = find(a.source), find(a.target)
        if ra != rb:
            parent[ra] = rb
            tree.append(aid)
    return tuple(tree)


@lru_cache(maxsize=64)
def _context(model: DimerModel) -> _Context:
    q = quiver_of(model)
    pms = enumerate_matchings(model)
    if not pms:
        raise ValueError("model has no perfect matchings")
    ref = pms[0]
    classes = tuple(matching_class(model, pm, ref) for pm in pms)
    tree = _spanning_tree(q)
    # undirected tree walks from the root: (signed ref-relative weight per pm, lift)
    adj: dict[int, list[tuple[int, EdgeId, int]]] = {v: [] for v in q.vertices}
    for aid in tree:
        a = q.arrows[aid]
        adj[a.source].append((a.target, aid, 1))
        adj[a.target].append((a.source, aid, -1))
    root = q.vertices[0]
    walk_lift = {root: (0, 0)}
    walk_delta = {root: [0] * len(pms)}
    todo = [root]
    while todo:
        v = todo.pop()
        for w, aid, sign in sorted(adj[v], key=lambda t: natural_key(t[1])):
            if w in walk_lift:
                continue
            lift = q.arrows[aid].lift
            walk_lift[w] = vadd(walk_lift[v], lift if sign > 0 else vneg(lift))
            d = [(aid in pm.edges) - (aid in ref.edges) for pm in pms]
            walk_delta[w] = [x + sign * y for x, y in zip(walk_delta[v], d)]
            todo.append(w)
    phi = tuple(
        {
            v: walk_delta[v][i] - (walk_lift[v][0] * k[0] + walk_lift[v][1] * k[1])
            for v in q.vertices
        }
        for i, k in enumerate(classes)
    )
    walks = {v: (walk_lift[v], tuple(walk_delta[v])) for v in q.vertices}
    return _Context(model, q, pms, classes, phi, tree, walks)


def spanning_tree(model: DimerModel) -> tuple[EdgeId, ...]:
    """Arrows of the minimal-id spanning tree of the quiver's underlying graph."""
    return _context(model).tree


def tree_walk(model: DimerModel, v: int) -> tuple[Vec2, tuple[int, ...]]:
    """Lift and per-matching relative weights of the tree walk from face 0 to ``v``.

    Arrows walked backwards count negatively; the weights are relative to
    the reference matching, so only their differences are meaningful.
    """
    return _context(model).walks[v]


def path_weight(model: DimerModel, path: Path, pm: PerfectMatching) -> int:
    return sum(1 for a in path.arrows if a in pm.edges)


def path_lift(model: DimerModel, path: Path) -> Vec2:
    q = quiver_of(model)
    total = (0, 0)
    for a in path.arrows:
        total = vadd(total, q.arrows[a].lift)
    return total


def path_class(model: DimerModel, path: Path) -> PathClass:
    ctx = _context(model)
    return PathClass(
        path.source,
        path.target(ctx.quiver),
        path_lift(model, path),
        path_weight(model, path, ctx.ref),
    )


def class_weight(model: DimerModel, cls: PathClass, pm: PerfectMatching) -> int:
    """Weight under ``pm`` of every path in the class, without a representative."""
    ctx = _context(model)
    k = ctx.classes[pm.id]
    phi = ctx.phi[pm.id]
    w = cls.ref_weight + cls.lift[0] * k[0] + cls.lift[1] * k[1] + phi[cls.target] - phi[cls.source]
    if w < 0:
        raise InvariantViolation(f"negative weight {w} for {cls} under matching {pm.id}")
    return w


def class_weights(model: DimerModel, cls: PathClass) -> tuple[int, ...]:
    return tuple(class_weight(model, cls, pm) for pm in _context(model).matchings)


# ---------------------------------------------------------------------------
# F-term rewriting


def rewrite_neighbors(model: DimerModel, arrows: tuple[EdgeId, ...]) -> Iterator[tuple[EdgeId, ...]]:
    """All paths reachable by replacing one embedded p_+(a) by p_-(a) or back."""
    rw = _context(model).rewrites
    n = len(arrows)
    for i, a in enumerate(arrows):
        for pat, rep in rw.get(a, ()):
            m = len(pat)
            if i + m <= n and arrows[i : i + m] == pat:
                yield arrows[:i] + rep + arrows[i + m :]


def fterm_closure(model: DimerModel, path: Path, bound: int, stop=None) -> tuple[set, bool]:
    """Breadth-first rewrite closure of ``path`` among paths of length <= bound.

    Returns (visited arrow tuples, exhausted) where ``exhausted`` is False
    when some rewrite would have exceeded the bound or ``stop`` was hit.
    """
    start = path.arrows
    seen = {start}
    queue = deque([start])
    exhausted = True
    while queue:
        cur = queue.popleft()
        for nxt in rewrite_neighbors(model, cur):
            if nxt in seen:
                continue
            if len(nxt) > bound:
                exhausted = False
                continue
            seen.add(nxt)
            if stop is not None and stop(nxt, seen):
                return seen, False
            queue.append(nxt)
    return seen, exhausted


def fterm_equivalent(model: DimerModel, p: Path, q: Path, bound: int) -> str:
    """'yes', 'no' or 'inconclusive'.

    Differing classes answer 'no' at once: rewrites preserve the class.
    """
    quiv = quiver_of(model)
    if p.source != q.source or p.target(quiv) != q.target(quiv):
        return "no"
    if p.arrows == q.arrows:
        return "yes"
    if path_class(model, p) != path_class(model, q):
        return "no"
    if not p.arrows or not q.arrows:
        # a length-0 path admits no rewrites
        return "inconclusive"
    target = q.arrows
    seen, _ = fterm_closure(model, p, bound, stop=lambda nxt, _s: nxt == target)
    return "yes" if target in seen else "inconclusive"


# ---------------------------------------------------------------------------
# path enumeration and quotient dimensions


def enumerate_paths(
    model: DimerModel, max_len: int, source: int | None = None, allowed=None
) -> Iterator[Path]:
    """All paths of length <= max_len (length-0 paths included), depth first."""
    q = quiver_of(model)
    sources = q.vertices if source is None else (source,)
    for s in sources:
        stack = [(s, ())]
        while stack:
            v, arrows = stack.pop()
            yield Path(s, arrows)
            if len(arrows) == max_len:
                continue
            for a in reversed(q.out_arrows[v]):
                if allowed is None or a in allowed:
                    stack.append((q.arrows[a].target, arrows + (a,)))


def directed_cycle(quiver: Quiver, allowed) -> tuple[EdgeId, ...] | None:
    """A directed cycle using only ``allowed`` arrows, or None."""
    color = {v: 0 for v in quiver.vertices}
    via: dict[int, EdgeId] = {}
    for root in quiver.vertices:
        if color[root]:
            continue
        stack = [(root, iter([a for a in quiver.out_arrows[root] if a in allowed]))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            a = next(it, None)
            if a is None:
                color[v] = 2
                stack.pop()
                continue
            w = quiver.arrows[a].target
            if color[w] == 1:
                cyc = [a]
                x = v
                while x != w:
                    cyc.append(via[x])
                    x = quiver.arrows[via[x]].source
                return tuple(reversed(cyc))
            if color[w] == 0:
                color[w] = 1
                via[w] = a
                stack.append((w, iter([b for b in quiver.out_arrows[w] if b in allowed])))
    return None


@dataclass(frozen=True)
class HomDimTable:
    vertices: tuple[int, ...]
    entries: dict[tuple[int, int], int]

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries[key]

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def rows(self) -> list[list[int]]:
        return [[self.entries[(v, w)] for w in self.vertices] for v in self.vertices]


def restricted_classes(model: DimerModel, d0: PerfectMatching) -> dict[tuple[int, int], set[PathClass]]:
    q = quiver_of(model)
    allowed = frozenset(q.arrows) - d0.edges
    cyc = directed_cycle(q, allowed)
    if cyc is not None:
        raise InfiniteDimensionError(
            f"quiver without the arrows of matching {d0.id} has the directed cycle {list(cyc)}", cyc
        )
    out: dict[tuple[int, int], set[PathClass]] = {(v, w): set() for v in q.vertices for w in q.vertices}
    # acyclic: no path is longer than the number of arrows
    for p in enumerate_paths(model, len(allowed), allowed=allowed):
        c = path_class(model, p)
        out[(c.source, c.target)].add(c)
    return out


def quotient_hom_dims(model: DimerModel, d0: PerfectMatching) -> HomDimTable:
    """Dimensions of e_w (C Gamma / I_{d0}) e_v, indexed (v, w) for paths v -> w."""
    q = quiver_of(model)
    cls = restricted_classes(model, d0)
    return HomDimTable(q.vertices, {k: len(v) for k, v in cls.items()})


# ---------------------------------------------------------------------------
# completeness of the class invariant


@dataclass
class CompletenessReport:
    max_len: int
    bound: int
    classes_checked: int
    paths_checked: int
    failures: list[tuple[PathClass, Path]]

    @property
    def passed(self) -> bool:
        return not self.failures


def check_class_completeness(model: DimerModel, max_len: int = 8, bound: int = 16) -> CompletenessReport:
    """Equal class implies F-term reachable, for all paths of length <= max_len."""
    groups: dict[PathClass, list[Path]] = {}
    n = 0
    for p in enumerate_paths(model, max_len):
        groups.setdefault(path_class(model, p), []).append(p)
        n += 1
    failures = []
    for cls, members in groups.items():
        if len(members) < 2:
            continue
        if not members[0].arrows:
            failures.extend((cls, m) for m in members[1:])
            continue
        wanted = {m.arrows for m in members}

        def done(_nxt, seen, wanted=wanted):
            return wanted <= seen

        seen, _ = fterm_closure(model, members[0], bound, stop=done)
        failures.extend((cls, m) for m in members if m.arrows not in seen)
    return CompletenessReport(max_len, bound, len(groups), n, failures)
