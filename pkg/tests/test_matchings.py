from itertools import combinations, permutations
from math import comb

import pytest

from dimerex.dimer import compute_faces
from dimerex.io import load_fixture
from dimerex.lattice import convex_hull, twice_area
from dimerex.matchings import (
    NoCentralCandidateError,
    NoMatchingError,
    binomial_boundary,
    characteristic_polygon,
    classify_matchings,
    enumerate_matchings,
    is_perfect_matching,
    matching_class,
)
from dimerex.dimer import DimerModel, Edge


def permanent_count(model):
    """Number of perfect matchings as the permanent of the black x white edge-count matrix."""
    bs, ws = list(model.blacks), list(model.whites)
    mult = {(b, w): 0 for b in bs for w in ws}
    for e in model.edges:
        mult[(e.black, e.white)] += 1
    total = 0
    for perm in permutations(ws):
        prod = 1
        for b, w in zip(bs, perm):
            prod *= mult[(b, w)]
        total += prod
    return total


def brute_force_matchings(model):
    n = len(model.blacks)
    return sorted(
        tuple(sorted(s))
        for s in combinations([e.id for e in model.edges], n)
        if is_perfect_matching(model, s)
    )


def test_c3_matchings_are_single_edges():
    pms = enumerate_matchings(load_fixture("c3"))
    assert [pm.sorted_edges() for pm in pms] == [("e1",), ("e2",), ("e3",)]


def test_dp0_has_six_matchings():
    m = load_fixture("dp0")
    assert len(enumerate_matchings(m)) == 6 == permanent_count(m)


def test_counts_match_permanent(any_model):
    assert len(enumerate_matchings(any_model)) == permanent_count(any_model)


def test_f0_matchings_by_subset_search():
    m = load_fixture("f0")
    pms = enumerate_matchings(m)
    assert all(len(pm.edges) == 2 for pm in pms)
    assert sorted(tuple(sorted(pm.edges)) for pm in pms) == brute_force_matchings(m)
    assert len(pms) == 8


def test_enumeration_order_and_ids(any_model):
    pms = enumerate_matchings(any_model)
    assert [pm.id for pm in pms] == list(range(len(pms)))
    keys = [[int(e[1:]) for e in pm.sorted_edges()] for pm in pms]
    assert keys == sorted(keys)
    assert all(is_perfect_matching(any_model, pm.edges) for pm in pms)


def test_unequal_colors_have_no_matching():
    m = load_fixture("c3")
    extra = DimerModel.build(
        ["b1", "b2"], ["w1"], list(m.edges) + [Edge("e4", "b2", "w1", (0, 0))],
        {"b1": list(m.cyclic_order["b1"]), "b2": ["e4"], "w1": list(m.cyclic_order["w1"]) + ["e4"]},
    )
    with pytest.raises(NoMatchingError):
        enumerate_matchings(extra)


def test_class_of_self_is_zero_and_antisymmetric(any_model):
    pms = enumerate_matchings(any_model)
    for a in pms:
        assert matching_class(any_model, a, a) == (0, 0)
        for b in pms:
            ab = matching_class(any_model, a, b)
            ba = matching_class(any_model, b, a)
            assert ab == (-ba[0], -ba[1])


def test_class_cocycle(any_model):
    pms = enumerate_matchings(any_model)
    for a in pms[:4]:
        for b in pms[:4]:
            for c in pms[:4]:
                ac = matching_class(any_model, a, c)
                ab = matching_class(any_model, a, b)
                bc = matching_class(any_model, b, c)
                assert ac == (ab[0] + bc[0], ab[1] + bc[1])


def test_c3_classes_by_hand():
    # {e_k} - {e1} is the loop e_k (white to black) then e1: total shift -s_k, rotated
    m = load_fixture("c3")
    pms = enumerate_matchings(m)
    got = [matching_class(m, pm, pms[0]) for pm in pms]
    shifts = [m.edge[e].shift for e in ("e1", "e2", "e3")]
    want = [(-s[1], s[0]) for s in shifts]
    assert got == want
    assert abs(twice_area(convex_hull(got))) == 1


def test_polygons():
    c3 = characteristic_polygon(load_fixture("c3"))
    assert len(c3.vertices) == 3 and c3.interior_points == () and c3.twice_area == 1
    assert set(c3.multiplicity.values()) == {1}
    dp0 = characteristic_polygon(load_fixture("dp0"))
    assert sorted(dp0.multiplicity.values()) == [1, 1, 1, 3]
    assert [dp0.multiplicity[p] for p in dp0.interior_points] == [3]
    f0 = characteristic_polygon(load_fixture("f0"))
    assert len(f0.vertices) == 4 and f0.twice_area == 4
    wf1 = characteristic_polygon(load_fixture("wf1"))
    assert len(wf1.vertices) == 3 and len(wf1.boundary_points) == 4


def test_total_multiplicity_and_corners(any_model):
    poly = characteristic_polygon(any_model)
    assert sum(poly.multiplicity.values()) == len(enumerate_matchings(any_model))
    assert all(poly.multiplicity[v] == 1 for v in poly.vertices)


def test_faces_equal_normalized_area(any_model):
    assert len(compute_faces(any_model)) == characteristic_polygon(any_model).twice_area


def test_boundary_multiplicities_are_binomial(any_model):
    assert binomial_boundary(characteristic_polygon(any_model))


def test_wf1_non_vertex_boundary_point_has_two_matchings():
    poly = characteristic_polygon(load_fixture("wf1"))
    side = [p for p in poly.boundary_points if p not in poly.vertices]
    assert len(side) == 1 and poly.multiplicity[side[0]] == comb(2, 1)


def test_polygon_invariant_under_change_of_reference(any_model):
    pms = enumerate_matchings(any_model)
    base = sorted(matching_class(any_model, pm, pms[0]) for pm in pms)
    for ref in pms[1:3]:
        shift = matching_class(any_model, pms[0], ref)
        moved = sorted(matching_class(any_model, pm, ref) for pm in pms)
        assert moved == sorted((x + shift[0], y + shift[1]) for x, y in base)


def test_classification():
    with pytest.raises(NoCentralCandidateError, match="no central candidate"):
        classify_matchings(load_fixture("c3"))
    rep = classify_matchings(load_fixture("dp0"))
    assert len(rep.central_candidates) == 3
    assert sorted(rep.labels.values()).count("corner") == 3
    rep = classify_matchings(load_fixture("f0"))
    assert rep.origin == (0, 0)
    assert list(rep.labels.values()).count("corner") == 4
    assert len(rep.central_candidates) == 4


def test_classification_rejects_non_interior_origin():
    m = load_fixture("dp0")
    corner = characteristic_polygon(m).vertices[0]
    with pytest.raises(NoCentralCandidateError):
        classify_matchings(m, corner)


def test_wf1_boundary_choices():
    rep = classify_matchings(load_fixture("wf1"))
    multi = {p: ids for p, ids in rep.boundary_matchings.items() if len(ids) > 1}
    assert len(multi) == 1
    (p, ids), = multi.items()
    assert rep.boundary_matching[p] == min(ids)
    assert rep.binomial_boundary
