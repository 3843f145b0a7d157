import random

import pytest

from oracles import is_regular
from subdivrules import canonical_form, check_axioms
from subdivrules.graphs import Edge, GraphError, LabeledGraph
from subdivrules.planar import (
    BARY,
    IDENTITY2D,
    QUAD,
    RULES2D,
    SIER,
    SURFACES,
    TETRA,
    TOR9,
    TRI1,
    Gluing,
    Surface2D,
    dual_graph,
    history_graph_2d,
    nonideal_tiles,
    subdivide_surface,
    validate_rule2d,
    validate_surface,
)


def k4():
    vs = {str(i): "T" for i in range(4)}
    es = [(f"{i}{j}", "E", str(i), str(j)) for i in range(4) for j in range(i + 1, 4)]
    return LabeledGraph.build(vs, es)


@pytest.mark.parametrize("name", sorted(RULES2D))
def test_bundled_rules_validate(name):
    assert validate_rule2d(RULES2D[name]()) == []


@pytest.mark.parametrize("surface,rule", [("TRI1", "BARY"), ("TETRA", "BARY"), ("TETRA", "SIER"), ("TOR9", "QUAD")])
def test_bundled_surfaces_validate(surface, rule):
    assert validate_surface(SURFACES[surface](), RULES2D[rule]()) == []


def test_tetra_dual_is_k4():
    assert canonical_form(dual_graph(TETRA(), BARY())) == canonical_form(k4())


def test_single_triangle_dual():
    g = dual_graph(TRI1(), BARY())
    assert len(g.vertices) == 1 and not g.edges


def test_bary_once_on_tetra():
    x = subdivide_surface(TETRA(), BARY())
    assert len(x.tiles) == 24
    g = dual_graph(x, BARY())
    assert len(g.vertices) == 24 and is_regular(g, 3)


def test_sier_once_on_tetra():
    x = subdivide_surface(TETRA(), SIER())
    assert len(x.tiles) == 16
    assert len(nonideal_tiles(x)) == 12


def test_sier_nonideal_growth_to_six_steps():
    x = TETRA()
    for n in range(1, 7):
        x = subdivide_surface(x, SIER())
        assert len(nonideal_tiles(x)) == 4 * 3 ** n
        assert len(x.tiles) == 4 * 4 ** n


def test_tile_count_recurrence():
    rule = BARY()
    x = TOR9()
    for _ in range(2):
        x = subdivide_surface(x, QUAD())
    assert len(x.tiles) == 9 * 16
    y = subdivide_surface(TETRA(), rule)
    per = {t: len(tt.layout.subtiles) for t, tt in rule.tile_types.items()}
    assert len(y.tiles) == sum(per[t] for t in TETRA().tiles.values())


def test_identity_rule_preserves_surface():
    x = TETRA()
    y = subdivide_surface(x, IDENTITY2D())
    assert canonical_form(dual_graph(x, IDENTITY2D())) == canonical_form(dual_graph(y, IDENTITY2D()))
    assert len(y.tiles) == len(x.tiles)


def test_history_sizes_and_regularity():
    assert history_graph_2d(TETRA(), BARY(), 3).sizes() == [1, 4, 24, 144]
    quad = history_graph_2d(TOR9(), QUAD(), 3)
    assert quad.sizes() == [1, 9, 36, 144]
    assert all(is_regular(g, 4) for g in quad.levels[1:])
    assert history_graph_2d(TETRA(), SIER(), 3).sizes() == [1, 4, 12, 36]


def test_sier_levels_are_not_all_two_regular():
    # level 1 is the tetrahedron's dual; deep corners face the ideal centre
    h = history_graph_2d(TETRA(), SIER(), 3)
    assert is_regular(h.levels[1], 3)
    assert is_regular(h.levels[2], 2)
    assert sorted({h.levels[3].degree(v) for v in h.levels[3].vertices}) == [1, 2]


def test_closed_examples_pass_axioms():
    assert check_axioms(history_graph_2d(TETRA(), BARY(), 3)).ok
    assert check_axioms(history_graph_2d(TOR9(), QUAD(), 3)).ok


def test_dual_graph_commutes_with_tile_renaming():
    x = subdivide_surface(TETRA(), BARY())
    ids = list(x.tiles)
    random.Random(1).shuffle(ids)
    ren = {t: f"t{i}" for i, t in enumerate(ids)}
    y = Surface2D({ren[t]: s for t, s in x.tiles.items()},
                  {g: Gluing((ren[v.a[0]], v.a[1]), (ren[v.b[0]], v.b[1]), v.reversed) for g, v in x.gluings.items()},
                  frozenset(ren[t] for t in x.ideal))
    assert canonical_form(dual_graph(x, BARY())) == canonical_form(dual_graph(y, BARY()))


def test_gluing_to_ideal_tile_is_dropped():
    x = subdivide_surface(TETRA(), SIER())
    g = dual_graph(x, SIER())
    assert len(g.vertices) == 12
    assert all(e.a not in x.ideal and e.b not in x.ideal for e in g.edges.values())


def test_bad_surface_is_reported():
    x = TRI1()
    t = next(iter(x.tiles))
    bad = Surface2D(dict(x.tiles), {"g": Gluing((t, 0), (t, 0))})
    assert validate_surface(bad, BARY())
    with pytest.raises(GraphError):
        history_graph_2d(bad, BARY(), 2)


def test_history_predecessors_follow_containment():
    h = history_graph_2d(TETRA(), BARY(), 3)
    for c, p in h.vertical:
        if p != "@":
            assert c.startswith(p + "/")
    assert isinstance(next(iter(h.levels[2].edges.values())), Edge)
