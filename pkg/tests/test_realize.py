import dataclasses

import pytest

from subdivrules import (
    LabeledGraph,
    Stub,
    VertexRule,
    barydual,
    build_base_complex,
    build_history,
    build_pair,
    build_seed_complex,
    build_subdivided_complex,
    canonical_form,
    cycdb,
    history_from_cells,
    ident,
    random_rule,
    verify_realization,
)
from subdivrules.gallery import triangle_seed
from subdivrules.realize import (
    BALL,
    BOUNDARY_DISK,
    IDEAL_BLOCK,
    IDEAL_COMPLEMENT,
    IDEAL_SPHERE,
    INTERIOR_DISK,
    SUB_DISK,
    CellularMap,
    cell_count_problems,
    complex_dual_graph,
)
from subdivrules.rules import CombRule, LabelAlphabet, RuleError


def counts(cx):
    return {k: len(cx.of_kind(k)) for k in (BALL, BOUNDARY_DISK, IDEAL_SPHERE, IDEAL_BLOCK)}


def two_symbol_rule():
    sig = {"a": ("h", "k"), "b": ("h", "k")}
    vr = {v: VertexRule(v, LabeledGraph({"c1": v}), (Stub("c1", 1, 1), Stub("c1", 2, 1))) for v in "ab"}
    seed = LabeledGraph.build({"1": "a", "2": "b"}, [("x", "h", "1", "2"), ("y", "k", "1", "2")])
    return CombRule(LabelAlphabet(("a", "b"), ("h", "k")), sig, vr, {"h": ("h",), "k": ("k",)}, seed)


@pytest.mark.parametrize("make", [cycdb, ident])
def test_base_complex_of_one_symbol_rules(make):
    assert counts(build_base_complex(make())) == {BALL: 1, BOUNDARY_DISK: 1, IDEAL_SPHERE: 1, IDEAL_BLOCK: 1}


def test_base_complex_shares_disks():
    cx = build_base_complex(two_symbol_rule())
    assert counts(cx) == {BALL: 2, BOUNDARY_DISK: 2, IDEAL_SPHERE: 2, IDEAL_BLOCK: 2}
    holders = {}
    for ball, disk, slot in cx.incidences:
        if slot is not None:
            holders.setdefault(disk, set()).add(ball)
    assert all(len(b) == 2 for b in holders.values())


def test_cycdb_subdivided_complex():
    cx, phi = build_subdivided_complex(cycdb())
    balls = [c for c in cx.of_kind(BALL) if c.owner == "a"]
    assert len(balls) == 2
    assert len(cx.of_kind(INTERIOR_DISK)) == 1
    assert len(cx.of_kind(SUB_DISK, "h")) == 1
    assert sorted((s, j) for _, s, j, _ in cx.exterior) == [(1, 1), (2, 1)]
    assert len(cx.of_kind(IDEAL_COMPLEMENT)) == 1
    assert phi.problems() == []
    assert phi.assoc["C:a"] == "I:a" and phi.assoc["I:a"] == "I:a"
    assert phi.assoc["SD:h/1"] == "D:h"


def test_ident_subdivided_complex():
    cx, _ = build_subdivided_complex(ident())
    assert len(cx.of_kind(BALL)) == 1
    assert not cx.of_kind(INTERIOR_DISK)
    assert len(cx.of_kind(SUB_DISK)) == 1


def test_phi_preserves_colour_and_dimension():
    for rule in (cycdb(), barydual(), random_rule(9)):
        _, phi = build_subdivided_complex(rule)
        assert phi.problems() == []
        for cid, cell in phi.source.cells.items():
            img = phi.target.cells[phi.assoc[cid]]
            assert img.ideal == cell.ideal and img.dim == cell.dim


def test_map_problems_detects_colour_change():
    cx, phi = build_subdivided_complex(cycdb())
    bad = CellularMap(cx, phi.target, {**phi.assoc, "C:a": "B:a"})
    assert any("C:a" in p for p in bad.problems())


def test_seed_complex_dual_matches_seed():
    for rule in (cycdb(), ident(), random_rule(7)):
        seed, structure = build_seed_complex(rule)
        assert canonical_form(complex_dual_graph(seed)) == canonical_form(rule.seed)
        assert structure.problems() == []
    seed, _ = build_seed_complex(cycdb())
    assert len(seed.of_kind(BALL)) == 3 and len(seed.identifications) == 3


def test_seed_with_parallel_edges():
    seed, _ = build_seed_complex(two_symbol_rule())
    assert len(complex_dual_graph(seed).edges) == 2


def test_history_from_cells_sizes():
    assert history_from_cells(build_pair(cycdb()), 4).sizes() == [1, 3, 6, 12, 24]
    assert history_from_cells(build_pair(ident()), 3).sizes() == [1, 3, 3, 3]
    assert history_from_cells(build_pair(barydual()), 3).sizes() == [1, 4, 24, 144]
    with pytest.raises(ValueError):
        history_from_cells(build_pair(cycdb()), 0)


@pytest.mark.parametrize("make", [cycdb, ident, barydual, two_symbol_rule])
def test_verify_bundled(make):
    rep = verify_realization(make(), 4)
    assert rep.passed, rep.lines()
    assert all(a == b for a, b in rep.levels)


@pytest.mark.parametrize("seed", range(1, 26))
def test_verify_random(seed):
    rule = random_rule(seed)
    assert verify_realization(rule, 3).passed
    assert cell_count_problems(rule, build_pair(rule)) == []


def test_verify_rejects_shallow_depth_and_bad_rules():
    with pytest.raises(ValueError):
        verify_realization(cycdb(), 1)
    broken = dataclasses.replace(cycdb(), seed=triangle_seed(edge="k"))
    with pytest.raises(RuleError):
        verify_realization(broken, 2)


def test_cells_match_expansion_ids():
    rule = random_rule(11)
    a = history_from_cells(build_pair(rule), 3)
    b = build_history(rule, 3)
    assert [g.vertices for g in a.levels] == [g.vertices for g in b.levels]
