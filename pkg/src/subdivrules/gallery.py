"""Bundled combinatorial rules: CYCDB, IDENT, BARYDUAL."""
from __future__ import annotations

from functools import lru_cache

from .graphs import LabeledGraph
from .rules import CombRule, LabelAlphabet, Stub, VertexRule


def triangle_seed(symbol="a", edge="h") -> LabeledGraph:
    return LabeledGraph.build(
        {"1": symbol, "2": symbol, "3": symbol},
        [("e12", edge, "1", "2"), ("e23", edge, "2", "3"), ("e31", edge, "3", "1")],
    )


def cycdb() -> CombRule:
    """Cycle doubling: every vertex splits into two joined children."""
    interior = LabeledGraph.build({"c1": "a", "c2": "a"}, [("i1", "h", "c1", "c2")])
    return CombRule(
        LabelAlphabet(("a",), ("h",)),
        {"a": ("h", "h")},
        {"a": VertexRule("a", interior, (Stub("c1", 1, 1), Stub("c2", 2, 1)))},
        {"h": ("h",)},
        triangle_seed(),
    )


def ident() -> CombRule:
    interior = LabeledGraph.build({"c1": "a"})
    return CombRule(
        LabelAlphabet(("a",), ("h",)),
        {"a": ("h", "h")},
        {"a": VertexRule("a", interior, (Stub("c1", 1, 1), Stub("c1", 2, 1)))},
        {"h": ("h",)},
        triangle_seed(),
    )


@lru_cache(maxsize=None)
def _barydual():
    from .axioms import infer_rule
    from .planar import BARY, TETRA, history_graph_2d

    return infer_rule(history_graph_2d(TETRA(), BARY(), 3))


def barydual() -> CombRule:
    """The rule read off barycentric subdivision of the tetrahedron's boundary."""
    return _barydual()


RULES = {"CYCDB": cycdb, "IDENT": ident, "BARYDUAL": barydual}
