"""Independent reference computations shared by the tests."""
from itertools import product

from dimerex.dimer import quiver_of
from dimerex.paths import enumerate_paths, rewrite_neighbors


def fterm_class_count(model, d0):
    """F-term classes of d0-free paths, found by union-find over single rewrites."""
    q = quiver_of(model)
    allowed = set(q.arrows) - d0.edges
    paths = list(enumerate_paths(model, len(allowed), allowed=allowed))
    index = {(p.source, p.arrows): i for i, p in enumerate(paths)}
    parent = list(range(len(paths)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, p in enumerate(paths):
        for nxt in rewrite_neighbors(model, p.arrows):
            j = index[(p.source, nxt)]
            parent[find(i)] = find(j)
    counts = {}
    for i, p in enumerate(paths):
        counts.setdefault((p.source, p.target(q)), set()).add(find(i))
    return {k: len(v) for k, v in counts.items()}


def scan_cohomology(rays, coeffs, box):
    """Visit every character in a box and count sign changes directly."""
    h = [0, 0, 0]
    for m in product(range(-box, box + 1), repeat=2):
        neg = [a + m[0] * v[0] + m[1] * v[1] < 0 for v, a in zip(rays, coeffs)]
        if not any(neg):
            h[0] += 1
        elif all(neg):
            h[2] += 1
        else:
            flips = sum(1 for i in range(len(neg)) if neg[i] != neg[i - 1])
            h[1] += flips // 2 - 1
    return tuple(h)


def scan_sections(rays, coeffs, box=20):
    """Characters in a box with every twisted coefficient >= 0."""
    return scan_cohomology(rays, coeffs, box)[0]
