"""Coloured two-dimensional subdivision rules acting on abstract surfaces.

Surfaces are gluing data only: tiles with typed sides, and pairs of sides
identified.  Side and child indices are 0-based here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from .graphs import Edge, GraphError, LabeledGraph
from .rules import ORIGIN, HistoryGraph, origin_level

IDEAL = "ideal"
NONIDEAL = "non-ideal"


@dataclass(frozen=True)
class EdgeType2D:
    id: str
    children: tuple[str, ...]
    color: str = NONIDEAL


class LayoutGluing(NamedTuple):
    id: str
    a: tuple[str, int]
    b: tuple[str, int]
    reversed: bool = True


@dataclass(frozen=True)
class TileLayout:
    subtiles: tuple[tuple[str, str], ...]
    gluings: tuple[LayoutGluing, ...]
    # (subtile, side) -> (parent side, child index along that side)
    boundary: Mapping[tuple[str, int], tuple[int, int]]

    __hash__ = None


@dataclass(frozen=True)
class TileType2D:
    id: str
    sides: tuple[tuple[str, int], ...]
    color: str
    layout: TileLayout

    __hash__ = None


@dataclass(frozen=True)
class SubdivisionRule2D:
    edge_types: Mapping[str, EdgeType2D]
    tile_types: Mapping[str, TileType2D]

    __hash__ = None


class Gluing(NamedTuple):
    a: tuple[str, int]
    b: tuple[str, int]
    reversed: bool = True


@dataclass(frozen=True)
class Surface2D:
    tiles: Mapping[str, str]
    gluings: Mapping[str, Gluing]
    ideal: frozenset = frozenset()

    __hash__ = None


def validate_rule2d(rule: SubdivisionRule2D) -> list[str]:
    """Problems with a 2D rule; empty when it is usable."""
    out = []
    ets, tts = rule.edge_types, rule.tile_types
    if not any(t.color == NONIDEAL for t in tts.values()):
        out.append("no non-ideal tile type")
    for e in ets.values():
        for c in e.children:
            if c not in ets:
                out.append(f"edge type {e.id}: unknown child {c}")
            elif e.color == IDEAL and ets[c].color != IDEAL:
                out.append(f"edge type {e.id} is ideal but child {c} is not")
    for t in tts.values():
        if len(t.sides) < 2:
            out.append(f"tile type {t.id}: fewer than two sides")
        for et, orient in t.sides:
            if et not in ets:
                out.append(f"tile type {t.id}: unknown edge type {et}")
            if orient not in (1, -1):
                out.append(f"tile type {t.id}: orientation flag must be +1 or -1")
        if out:
            continue
        lay = t.layout
        kinds = dict(lay.subtiles)
        for sid, st in lay.subtiles:
            if st not in tts:
                out.append(f"tile type {t.id}: subtile {sid} has unknown type {st}")
            elif t.color == IDEAL and tts[st].color != IDEAL:
                out.append(f"tile type {t.id} is ideal but subtile {sid} is not")
        if any(st not in tts for st in kinds.values()):
            continue
        used = {}
        for g in lay.gluings:
            for end in (g.a, g.b):
                used[end] = used.get(end, 0) + 1
            ta, tb = tts[kinds[g.a[0]]], tts[kinds[g.b[0]]]
            if ta.sides[g.a[1]][0] != tb.sides[g.b[1]][0]:
                out.append(f"tile type {t.id}: gluing {g.id} joins different edge types")
        for end in lay.boundary:
            used[end] = used.get(end, 0) + 1
        for sid, st in lay.subtiles:
            for k in range(len(tts[st].sides)):
                if used.get((sid, k), 0) != 1:
                    out.append(f"tile type {t.id}: side {k} of subtile {sid} is covered {used.get((sid, k), 0)} times")
        want = {(i, j) for i, (et, _) in enumerate(t.sides) for j in range(len(ets[et].children))}
        got = list(lay.boundary.values())
        if sorted(got) != sorted(want):
            out.append(f"tile type {t.id}: boundary assignment does not cover every side child exactly once")
        for (sid, k), (i, j) in lay.boundary.items():
            if (i, j) in want:
                child_et = ets[t.sides[i][0]].children[j]
                if tts[kinds[sid]].sides[k][0] != child_et:
                    out.append(f"tile type {t.id}: subtile {sid} side {k} has the wrong edge type for side {i} child {j}")
    return out


def validate_surface(x: Surface2D, rule: SubdivisionRule2D) -> list[str]:
    out = []
    used = {}
    for tid, tt in x.tiles.items():
        if tt not in rule.tile_types:
            out.append(f"tile {tid}: unknown type {tt}")
    if out:
        return out
    for gid, g in x.gluings.items():
        if g.a == g.b:
            out.append(f"gluing {gid}: side glued to itself")
        for tid, k in (g.a, g.b):
            if tid not in x.tiles or not 0 <= k < len(rule.tile_types[x.tiles[tid]].sides):
                out.append(f"gluing {gid}: no side {k} on tile {tid}")
            used[(tid, k)] = used.get((tid, k), 0) + 1
        if not out and _side_type(x, rule, g.a) != _side_type(x, rule, g.b):
            out.append(f"gluing {gid}: edge types differ")
    for side, n in used.items():
        if n > 1:
            out.append(f"side {side} glued {n} times")
    return out


def _side_type(x, rule, side):
    tid, k = side
    return rule.tile_types[x.tiles[tid]].sides[k][0]


def subdivide_surface(x: Surface2D, rule: SubdivisionRule2D) -> Surface2D:
    """Pull the rule's subdivision back onto every tile of ``x``.

    Child tiles are ``tile/sub``, interior gluings ``tile/g`` and gluings
    across a parent gluing ``g#k``.
    """
    tts, ets = rule.tile_types, rule.edge_types
    tiles, gluings, ideal = {}, {}, set()
    where = {}  # tile type -> {(parent side, child idx): (subtile, side)}
    for tid, tt in x.tiles.items():
        t = tts[tt]
        for sid, st in t.layout.subtiles:
            tiles[f"{tid}/{sid}"] = st
            if tts[st].color == IDEAL:
                ideal.add(f"{tid}/{sid}")
        for g in t.layout.gluings:
            gluings[f"{tid}/{g.id}"] = Gluing((f"{tid}/{g.a[0]}", g.a[1]), (f"{tid}/{g.b[0]}", g.b[1]), g.reversed)
        if tt not in where:
            where[tt] = {pos: side for side, pos in t.layout.boundary.items()}
    for gid, g in x.gluings.items():
        (ta, sa), (tb, sb) = g.a, g.b
        ea, eb = _side_type(x, rule, g.a), _side_type(x, rule, g.b)
        ka, kb = ets[ea].children, ets[eb].children
        if ea != eb or len(ka) != len(kb):
            raise GraphError(f"gluing {gid}: sides carry {ea} and {eb}; child lists do not match")
        n = len(ka)
        for k in range(n):
            k2 = n - 1 - k if g.reversed else k
            if ka[k] != kb[k2]:
                raise GraphError(f"gluing {gid}: child {k} ({ka[k]}) meets child {k2} ({kb[k2]})")
            suba, sidea = where[x.tiles[ta]][(sa, k)]
            subb, sideb = where[x.tiles[tb]][(sb, k2)]
            gluings[f"{gid}#{k}"] = Gluing((f"{ta}/{suba}", sidea), (f"{tb}/{subb}", sideb), g.reversed)
    return Surface2D(dict(sorted(tiles.items())), dict(sorted(gluings.items())), frozenset(ideal))


def nonideal_tiles(x: Surface2D) -> list[str]:
    return [t for t in x.tiles if t not in x.ideal]


def dual_graph(x: Surface2D, rule: SubdivisionRule2D | None = None) -> LabeledGraph:
    """Non-ideal tiles joined across every gluing of two distinct non-ideal tiles.

    Edge symbols are the glued side's edge type, which needs ``rule``;
    without one every edge is labelled ``E``.
    """
    verts = {t: tt for t, tt in x.tiles.items() if t not in x.ideal}
    edges = {}
    for gid, g in x.gluings.items():
        ta, tb = g.a[0], g.b[0]
        if ta in verts and tb in verts and ta != tb:
            sym = _side_type(x, rule, g.a) if rule is not None else "E"
            edges[gid] = Edge(sym, ta, tb)
    return LabeledGraph(verts, edges)


def history_graph_2d(x: Surface2D, rule: SubdivisionRule2D, depth: int, origin_symbol: str = "O") -> HistoryGraph:
    problems = validate_rule2d(rule) + validate_surface(x, rule)
    if problems:
        raise GraphError("; ".join(problems))
    levels = [origin_level(origin_symbol)]
    vertical = []
    eparent = {}
    cur = x
    g = dual_graph(cur, rule)
    levels.append(g)
    vertical.extend((v, ORIGIN) for v in g.vertices)
    while len(levels) <= depth:
        nxt = subdivide_surface(cur, rule)
        g = dual_graph(nxt, rule)
        for v in g.vertices:
            vertical.append((v, v.rsplit("/", 1)[0]))
        for eid in g.edges:
            if "#" in eid:
                eparent[eid] = eid.rsplit("#", 1)[0]
        levels.append(g)
        cur = nxt
    return HistoryGraph(tuple(levels), tuple(vertical), eparent, origin_symbol)


# -- bundled rules and surfaces ---------------------------------------------

def _simple_type(tid, edge, nsides, color=NONIDEAL, layout=None):
    if layout is None:
        layout = TileLayout(((tid, tid),), (), {(tid, k): (k, 0) for k in range(nsides)})
    return TileType2D(tid, tuple((edge, 1) for _ in range(nsides)), color, layout)


def IDENTITY2D() -> SubdivisionRule2D:
    return SubdivisionRule2D(
        {"E": EdgeType2D("E", ("E",))},
        {"T": _simple_type("T", "E", 3), "S": _simple_type("S", "E", 4)},
    )


def _bary_layout():
    # around the barycentre: a_i = (P_i, M_i, G), b_i = (M_i, P_{i+1}, G)
    subs, glue, bnd = [], [], {}
    for i in range(3):
        subs += [(f"a{i}", "T"), (f"b{i}", "T")]
        bnd[(f"a{i}", 0)] = (i, 0)
        bnd[(f"b{i}", 0)] = (i, 1)
        glue.append(LayoutGluing(f"m{i}", (f"a{i}", 1), (f"b{i}", 2)))
        glue.append(LayoutGluing(f"v{i}", (f"b{i}", 1), (f"a{(i + 1) % 3}", 2)))
    return TileLayout(tuple(subs), tuple(glue), bnd)


def BARY() -> SubdivisionRule2D:
    return SubdivisionRule2D(
        {"E": EdgeType2D("E", ("E", "E"))},
        {"T": _simple_type("T", "E", 3, layout=_bary_layout())},
    )


def QUAD() -> SubdivisionRule2D:
    # sides 0..3 = bottom, right, top, left, counter-clockwise
    layout = TileLayout(
        (("q00", "S"), ("q10", "S"), ("q01", "S"), ("q11", "S")),
        (
            LayoutGluing("h0", ("q00", 1), ("q10", 3)),
            LayoutGluing("h1", ("q01", 1), ("q11", 3)),
            LayoutGluing("v0", ("q00", 2), ("q01", 0)),
            LayoutGluing("v1", ("q10", 2), ("q11", 0)),
        ),
        {("q00", 0): (0, 0), ("q10", 0): (0, 1), ("q10", 1): (1, 0), ("q11", 1): (1, 1),
         ("q11", 2): (2, 0), ("q01", 2): (2, 1), ("q01", 3): (3, 0), ("q00", 3): (3, 1)},
    )
    return SubdivisionRule2D(
        {"E": EdgeType2D("E", ("E", "E"))},
        {"S": _simple_type("S", "E", 4, layout=layout)},
    )


def _sier_layout(corner, centre):
    # k_i = (P_i, M_i, M_{i-1}); centre = (M_0, M_1, M_2), all counter-clockwise
    subs = [(f"k{i}", corner) for i in range(3)] + [("c", centre)]
    glue = [LayoutGluing(f"g{i}", (f"k{i}", 1), ("c", (i - 1) % 3)) for i in range(3)]
    bnd = {}
    for i in range(3):
        bnd[(f"k{i}", 0)] = (i, 0)
        bnd[(f"k{(i + 1) % 3}", 2)] = (i, 1)
    return TileLayout(tuple(subs), tuple(glue), bnd)


def SIER() -> SubdivisionRule2D:
    return SubdivisionRule2D(
        {"E": EdgeType2D("E", ("E", "E"))},
        {
            "T": _simple_type("T", "E", 3, layout=_sier_layout("T", "U")),
            "U": _simple_type("U", "E", 3, IDEAL, layout=_sier_layout("U", "U")),
        },
    )


RULES2D = {"IDENTITY2D": IDENTITY2D, "BARY": BARY, "QUAD": QUAD, "SIER": SIER}


def TRI1() -> Surface2D:
    return Surface2D({"t": "T"}, {})


def TETRA() -> Surface2D:
    faces = [(1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)]
    tiles = {f"f{i}": "T" for i in range(4)}
    where = {}
    for i, f in enumerate(faces):
        for k in range(3):
            where[(f[k], f[(k + 1) % 3])] = (f"f{i}", k)
    gluings = {}
    n = 0
    for (p, q), side in sorted(where.items()):
        if p < q:
            gluings[f"g{n}"] = Gluing(side, where[(q, p)], True)
            n += 1
    return Surface2D(tiles, gluings)


def TOR9() -> Surface2D:
    tiles = {f"s{x}{y}": "S" for x in range(3) for y in range(3)}
    gluings = {}
    for x in range(3):
        for y in range(3):
            gluings[f"r{x}{y}"] = Gluing((f"s{x}{y}", 1), (f"s{(x + 1) % 3}{y}", 3))
            gluings[f"u{x}{y}"] = Gluing((f"s{x}{y}", 2), (f"s{x}{(y + 1) % 3}", 0))
    return Surface2D(tiles, gluings)


SURFACES = {"TRI1": TRI1, "TETRA": TETRA, "TOR9": TOR9}
