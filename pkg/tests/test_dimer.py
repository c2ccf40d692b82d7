import pytest

from conftest import bigon_model, two_cycle_model
from dimerex.dimer import (
    DimerModel,
    DimerStructureError,
    Edge,
    check_consistency,
    compute_faces,
    positively_parallel,
    quiver_of,
    validate_dimer,
    vadd,
    zigzag_paths,
)
from dimerex.io import load_fixture


def c3_without(edge_id):
    m = load_fixture("c3")
    edges = [e for e in m.edges if e.id != edge_id]
    order = {n: [x for x in m.cyclic_order[n] if x != edge_id] for n in m.nodes}
    return DimerModel.build(m.blacks, m.whites, edges, order)


def test_c3_validates_with_one_face():
    rep = validate_dimer(load_fixture("c3"))
    assert rep.passed and rep.num_faces == 1


def test_c3_missing_edge_fails():
    rep = validate_dimer(c3_without("e3"))
    assert not rep.passed
    assert any("Euler" in v or "disk" in v for v in rep.violations)


def test_dp0_validates_with_three_faces():
    m = load_fixture("dp0")
    rep = validate_dimer(m)
    assert rep.passed and rep.num_faces == 3
    assert (len(m.blacks), len(m.whites), len(m.edges)) == (3, 3, 9)


def test_unequal_colors_warn():
    m = load_fixture("c3")
    extra = DimerModel.build(
        ["b1", "b2"], ["w1"], list(m.edges) + [Edge("e4", "b2", "w1", (0, 0))],
        {"b1": list(m.cyclic_order["b1"]), "b2": ["e4"], "w1": list(m.cyclic_order["w1"]) + ["e4"]},
    )
    rep = validate_dimer(extra)
    assert rep.warnings


@pytest.mark.parametrize(
    "kwargs, offending",
    [
        (dict(blacks=["b1", "b1"]), "b1"),
        (dict(edges_extra=[Edge("e1", "b1", "w1", (0, 0))]), "e1"),
        (dict(edges_extra=[Edge("e9", "b7", "w1", (0, 0))]), "e9"),
    ],
)
def test_structural_errors_name_the_offender(kwargs, offending):
    m = load_fixture("c3")
    blacks = kwargs.get("blacks", ["b1"])
    edges = list(m.edges) + kwargs.get("edges_extra", [])
    with pytest.raises(DimerStructureError) as info:
        DimerModel.build(blacks, ["w1"], edges, {n: list(m.cyclic_order[n]) for n in m.nodes})
    assert info.value.offending == offending


def test_face_counts_and_lengths():
    assert [len(f) for f in compute_faces(load_fixture("c3"))] == [6]
    assert len(compute_faces(load_fixture("f0"))) == 4
    assert [len(f) for f in compute_faces(load_fixture("dp0"))] == [6, 6, 6]


def test_faces_cover_every_dart_once(any_model):
    darts = [d for f in compute_faces(any_model) for d in f.boundary]
    assert len(darts) == len(set(darts)) == 2 * len(any_model.edges)


def test_face_boundaries_alternate_colors(any_model):
    for f in compute_faces(any_model):
        colors = [any_model.is_black(n) for n in f.nodes]
        assert all(colors[i] != colors[i - 1] for i in range(len(colors)))


def test_euler_relation(any_model):
    m = any_model
    assert len(m.blacks) + len(m.whites) - len(m.edges) + len(compute_faces(m)) == 0


def test_quiver_shapes():
    q = quiver_of(load_fixture("c3"))
    assert len(q.vertices) == 1 and len(q.arrows) == 3
    assert all(len(pp) == 2 and len(pm) == 2 for pp, pm in q.relations.values())
    q = quiver_of(load_fixture("dp0"))
    assert len(q.vertices) == 3 and len(q.arrows) == 9
    assert all(len(out) == 3 for out in q.out_arrows.values())


def _ends(q, path):
    return q.arrows[path[0]].source, q.arrows[path[-1]].target


def test_relation_paths_run_from_target_to_source(any_model):
    q = quiver_of(any_model)
    for aid, (pp, pm) in q.relations.items():
        a = q.arrows[aid]
        for path in (pp, pm):
            for x, y in zip(path, path[1:]):
                assert q.arrows[x].target == q.arrows[y].source
            assert _ends(q, path) == (a.target, a.source)


def test_relation_cycles_have_zero_lift(any_model):
    q = quiver_of(any_model)
    for aid, rel in q.relations.items():
        for path in rel:
            total = q.arrows[aid].lift
            for b in path:
                total = vadd(total, q.arrows[b].lift)
            assert total == (0, 0)


def test_white_node_on_the_right_of_each_arrow(any_model):
    # p_plus goes around the white endpoint: every arrow in it touches that node
    m = any_model
    q = quiver_of(m)
    for aid, (pp, _) in q.relations.items():
        w = m.edge[aid].white
        assert all(m.edge[b].white == w for b in pp)
        assert len(pp) == m.degree(w) - 1


def test_zigzag_c3():
    zz = zigzag_paths(load_fixture("c3"))
    classes = sorted(z.homology for z in zz)
    assert len(zz) == 3
    assert sum(c[0] for c in classes) == sum(c[1] for c in classes) == 0
    # unimodular: any two classes form a basis
    (a, b), (c, d) = classes[0], classes[1]
    assert abs(a * d - b * c) == 1


def test_zigzag_f0_normals_of_square():
    zz = zigzag_paths(load_fixture("f0"))
    assert sorted(z.homology for z in zz) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]


def test_zigzag_class_sum_and_edge_coverage(any_model):
    zz = zigzag_paths(any_model)
    total = (0, 0)
    for z in zz:
        total = vadd(total, z.homology)
    assert total == (0, 0)
    count = {}
    for z in zz:
        for e in z.edges:
            count[e] = count.get(e, 0) + 1
    assert set(count.values()) == {2} and len(count) == len(any_model.edges)


def test_fixtures_are_consistent(any_model):
    assert check_consistency(any_model).passed


def test_consistent_models_have_non_parallel_pairs_per_edge(any_model):
    zz = zigzag_paths(any_model)
    owners = {}
    for i, z in enumerate(zz):
        for e in z.edges:
            owners.setdefault(e, []).append(i)
    for i, j in owners.values():
        assert i != j and not positively_parallel(zz[i].homology, zz[j].homology)


def test_two_cycle_model_has_zero_class():
    rep = check_consistency(two_cycle_model())
    assert not rep.passed and rep.zero_class and not rep.criteria()["nonzero_classes"]


def test_bigon_model_is_valid_but_inconsistent():
    m = bigon_model()
    assert validate_dimer(m).passed
    rep = check_consistency(m)
    assert not rep.passed and not rep.criteria()["no_parallel_sharing"]
