import dataclasses

import pytest

from subdivrules import (
    HistoryGraph,
    InferenceError,
    LabeledGraph,
    build_history,
    canonical_form,
    check_axioms,
    cycdb,
    edge_preimages,
    ident,
    infer_rule,
    random_rule,
    refine_labels,
)
from subdivrules.axioms import star_certificate
from subdivrules.planar import BARY, TRI1, history_graph_2d


def test_cycdb_passes():
    rep = check_axioms(build_history(cycdb(), 5))
    assert rep.ok and rep.failed() == []
    assert len(rep.lines()) == 5


def test_double_predecessor_fails_condition_3():
    h = build_history(cycdb(), 2)
    child = next(iter(h.levels[2].vertices))
    other = [p for p in h.levels[1].vertices if p != h.pred[child]][0]
    broken = dataclasses.replace(h, vertical=h.vertical + ((child, other),))
    rep = check_axioms(broken)
    assert not rep.condition(3).ok
    assert "2 predecessors" in rep.condition(3).detail
    assert rep.condition(1).ok and rep.condition(2).ok


def test_skipped_level_fails_condition_3():
    h = build_history(cycdb(), 2)
    child = next(iter(h.levels[2].vertices))
    vertical = tuple((c, "@" if c == child else p) for c, p in h.vertical)
    assert not check_axioms(dataclasses.replace(h, vertical=vertical)).condition(3).ok


def test_two_origins_fail_condition_1():
    h = build_history(cycdb(), 2)
    lv0 = LabeledGraph({"@": "O", "@2": "O"})
    assert not check_axioms(dataclasses.replace(h, levels=(lv0,) + h.levels[1:])).condition(1).ok


def test_vertex_in_two_levels_fails_condition_2():
    h = build_history(ident(), 2)
    lv2 = LabeledGraph({**h.levels[2].vertices, "1": "a"}, h.levels[2].edges)
    assert not check_axioms(dataclasses.replace(h, levels=h.levels[:2] + (lv2,))).condition(2).ok


def test_star_mismatch_fails_condition_4():
    h = build_history(cycdb(), 2)
    g = h.levels[2]
    extra = next(iter(g.edges))
    e = g.edges[extra]
    lv = LabeledGraph(g.vertices, {**g.edges, "extra": e})
    rep = check_axioms(dataclasses.replace(h, levels=h.levels[:2] + (lv,)))
    assert not rep.condition(4).ok


def test_subdivision_mismatch_fails_condition_5():
    # swap the parents of two children across one crossing edge: every star
    # is unchanged but the two parents now hold a non-adjacent pair
    h = build_history(cycdb(), 3)
    lv2 = h.levels[2]
    cross = next(e for eid, e in lv2.edges.items() if "#" in eid)
    x, y = cross.a, cross.b
    pred = h.pred
    vertical = tuple((c, pred[y] if c == x else pred[x] if c == y else p) for c, p in h.vertical)
    rep = check_axioms(dataclasses.replace(h, vertical=vertical, edge_parent={}))
    assert rep.condition(4).ok
    assert not rep.condition(5).ok
    assert "subdivision" in rep.condition(5).detail


def test_broken_morphism_is_reported_not_raised():
    h = build_history(cycdb(), 3)
    lv2 = h.levels[2]
    eid = next(e for e in lv2.edges if "#" not in e)
    edges = {k: v for k, v in lv2.edges.items() if k != eid}
    rep = check_axioms(dataclasses.replace(h, levels=h.levels[:2] + (LabeledGraph(lv2.vertices, edges),) + h.levels[3:]))
    assert not rep.condition(5).ok


def test_bounded_triangle_fails_then_refines():
    h = history_graph_2d(TRI1(), BARY(), 4)
    rep = check_axioms(h)
    c4 = rep.condition(4)
    assert not c4.ok
    assert "degree 2" in c4.detail and "degree 3" in c4.detail
    refined = refine_labels(h)
    assert check_axioms(refined).ok
    assert refined.sizes() == h.sizes()


def test_refine_keeps_passing_graph_labels():
    h = build_history(cycdb(), 4)
    r = refine_labels(h)
    assert [canonical_form(a) for a in r.levels] == [canonical_form(b) for b in h.levels]


def test_star_certificate_depends_on_degree():
    h = build_history(cycdb(), 2)
    g = h.levels[2]
    assert len({star_certificate(g, v) for v in g.vertices}) == 1


@pytest.mark.parametrize("make", [cycdb, ident])
def test_edge_preimages_are_vertex_free(make):
    frags = list(edge_preimages(build_history(make(), 4)))
    assert frags and all(not f.vertices for _, _, f in frags)


@pytest.mark.parametrize("make", [cycdb, ident, lambda: random_rule(5), lambda: random_rule(17)])
def test_infer_round_trip(make):
    rule = make()
    h = build_history(rule, 4)
    again = build_history(infer_rule(h), 4)
    assert [canonical_form(g) for g in again.levels] == [canonical_form(g) for g in h.levels]


def test_infer_needs_three_levels():
    with pytest.raises(InferenceError):
        infer_rule(build_history(cycdb(), 1))


def test_infer_rejects_failing_graph():
    with pytest.raises(ValueError):
        infer_rule(history_graph_2d(TRI1(), BARY(), 3))


def test_history_graph_helpers():
    h = build_history(cycdb(), 2)
    assert isinstance(h, HistoryGraph)
    assert h.depth == 2
    flat = h.flatten()
    assert len(flat.vertices) == 10
    assert sum(1 for e in flat.edges.values() if e.symbol == "|") == 9
