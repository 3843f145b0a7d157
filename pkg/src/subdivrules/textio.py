"""Line-oriented text formats for rules and history graphs, JSON for planar data.

Rule documents::

    origin O
    vertex-symbols a
    edge-symbols h
    signature a : h h
    edge-rule h : h
    vertex-rule a
      child c1 a
      child c2 a
      interior i1 h c1 c2
      stub c1 1 1
      stub c2 2 1
    end
    seed
      vertex 1 a
      edge e12 h 1 2
    end

History documents::

    history O
    level 0
      vertex @ O
    level 1
      vertex 1 a
      edge e12 h 1 2
    pred 1 @
    edge-parent e12#1 e12

Blank lines and lines starting with ``#`` are ignored; ids may contain ``#``.
Indentation is cosmetic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .graphs import Edge, GraphError, LabeledGraph
from .planar import (
    EdgeType2D,
    Gluing,
    LayoutGluing,
    SubdivisionRule2D,
    Surface2D,
    TileLayout,
    TileType2D,
)
from .rules import CombRule, HistoryGraph, LabelAlphabet, RuleError, Stub, VertexRule, validate_rule


class RuleSyntaxError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        self.line, self.col = line, col
        super().__init__(f"line {line}, column {col}: {message}")


@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _strip_comment(line: str) -> str:
    s = line.lstrip()
    return "" if s.startswith("#") else line


def _tokenize(text: str):
    """Lines of tokens; a line whose first non-blank character is ``#`` is a comment."""
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        body = _strip_comment(raw)
        toks, word, col = [], "", 0
        for i, ch in enumerate(body + " "):
            if ch.isspace():
                if word:
                    toks.append(_Tok(word, n, col))
                    word = ""
            else:
                if not word:
                    col = i + 1
                word += ch
        if toks:
            out.append(toks)
    return out


def _expect(toks, n, what):
    if len(toks) != n:
        t = toks[min(len(toks), n) - 1] if len(toks) >= n else toks[-1]
        raise RuleSyntaxError(t.line, t.col, f"{what}: expected {n - 1} fields, got {len(toks) - 1}")


def _int(tok):
    try:
        v = int(tok.text)
    except ValueError:
        raise RuleSyntaxError(tok.line, tok.col, f"expected an integer, got {tok.text!r}") from None
    if v < 1:
        raise RuleSyntaxError(tok.line, tok.col, f"indices are 1-based, got {v}")
    return v


def _colon_list(toks, what):
    if len(toks) < 3 or toks[2].text != ":":
        t = toks[min(2, len(toks) - 1)]
        raise RuleSyntaxError(t.line, t.col, f"{what}: expected '<symbol> : <symbols...>'")
    return toks[1].text, tuple(t.text for t in toks[3:])


def _graph(verts, edges, tok):
    try:
        return LabeledGraph(verts, edges)
    except GraphError as exc:
        raise RuleSyntaxError(tok.line, tok.col, str(exc)) from None


def _block(lines, i, start):
    """Lines up to the matching ``end``; returns (body, next index)."""
    body = []
    while i < len(lines):
        if lines[i][0].text == "end":
            _expect(lines[i], 1, "end")
            return body, i + 1
        body.append(lines[i])
        i += 1
    raise RuleSyntaxError(start.line, start.col, f"{start.text} block is not closed by 'end'")


def parse_rule(text: str, validate: bool = True) -> CombRule:
    lines = _tokenize(text)
    if not lines:
        raise RuleSyntaxError(0, 0, "empty document")
    origin = "O"
    vsyms = esyms = None
    sigs, erules, vrules = {}, {}, {}
    seed = None
    i = 0
    while i < len(lines):
        toks = lines[i]
        head = toks[0]
        kw = head.text
        if kw == "origin":
            _expect(toks, 2, kw)
            origin = toks[1].text
        elif kw in ("vertex-symbols", "edge-symbols"):
            syms = tuple(t.text for t in toks[1:])
            if len(set(syms)) != len(syms):
                raise RuleSyntaxError(head.line, head.col, f"{kw}: repeated symbol")
            if kw == "vertex-symbols":
                vsyms = syms
            else:
                esyms = syms
        elif kw == "signature":
            v, sig = _colon_list(toks, kw)
            if v in sigs:
                raise RuleSyntaxError(toks[1].line, toks[1].col, f"second signature for {v}")
            sigs[v] = sig
        elif kw == "edge-rule":
            e, kids = _colon_list(toks, kw)
            if e in erules:
                raise RuleSyntaxError(toks[1].line, toks[1].col, f"second edge rule for {e}")
            erules[e] = kids
        elif kw == "vertex-rule":
            _expect(toks, 2, kw)
            v = toks[1].text
            if v in vrules:
                raise RuleSyntaxError(toks[1].line, toks[1].col, f"second vertex rule for {v}")
            body, i = _block(lines, i + 1, head)
            kids, interior, stubs = {}, {}, []
            for b in body:
                k = b[0].text
                if k == "child":
                    _expect(b, 3, k)
                    kids[b[1].text] = b[2].text
                elif k == "interior":
                    _expect(b, 5, k)
                    interior[b[1].text] = Edge(b[2].text, b[3].text, b[4].text)
                elif k == "stub":
                    _expect(b, 4, k)
                    stubs.append(Stub(b[1].text, _int(b[2]), _int(b[3])))
                else:
                    raise RuleSyntaxError(b[0].line, b[0].col, f"unexpected {k!r} inside vertex-rule")
            vrules[v] = VertexRule(v, _graph(kids, interior, head), tuple(stubs))
            continue
        elif kw == "seed":
            _expect(toks, 1, kw)
            if seed is not None:
                raise RuleSyntaxError(head.line, head.col, "second seed block")
            body, i = _block(lines, i + 1, head)
            verts, edges = {}, {}
            for b in body:
                k = b[0].text
                if k == "vertex":
                    _expect(b, 3, k)
                    verts[b[1].text] = b[2].text
                elif k == "edge":
                    _expect(b, 5, k)
                    edges[b[1].text] = Edge(b[2].text, b[3].text, b[4].text)
                else:
                    raise RuleSyntaxError(b[0].line, b[0].col, f"unexpected {k!r} inside seed")
            seed = _graph(verts, edges, head)
            continue
        else:
            raise RuleSyntaxError(head.line, head.col, f"unknown keyword {kw!r}")
        i += 1
    last = lines[-1][-1]
    for name, val in (("vertex-symbols", vsyms), ("edge-symbols", esyms), ("seed", seed)):
        if val is None:
            raise RuleSyntaxError(last.line, last.col, f"missing {name}")
    rule = CombRule(LabelAlphabet(vsyms, esyms, origin), sigs, vrules, erules, seed)
    if validate:
        report = validate_rule(rule)
        if not report.ok:
            raise RuleError(report)
    return rule


def _sorted_ids(d):
    return sorted(d, key=lambda s: (len(s), s))


def render_rule(rule: CombRule) -> str:
    a = rule.alphabet
    out = [f"origin {a.origin_symbol}",
           "vertex-symbols " + " ".join(a.vertex_symbols),
           "edge-symbols " + " ".join(a.edge_symbols)]
    for v in a.vertex_symbols:
        out.append(f"signature {v} :" + "".join(f" {e}" for e in rule.signatures[v]))
    for e in a.edge_symbols:
        out.append(f"edge-rule {e} :" + "".join(f" {f}" for f in rule.edge_rules[e]))
    for v in a.vertex_symbols:
        vr = rule.vertex_rules[v]
        out.append(f"vertex-rule {v}")
        for c in _sorted_ids(vr.interior.vertices):
            out.append(f"  child {c} {vr.interior.vertices[c]}")
        for ie in _sorted_ids(vr.interior.edges):
            e = vr.interior.edges[ie]
            out.append(f"  interior {ie} {e.symbol} {e.a} {e.b}")
        for s in vr.stubs:
            out.append(f"  stub {s.child} {s.slot} {s.index}")
        out.append("end")
    out.append("seed")
    for u in _sorted_ids(rule.seed.vertices):
        out.append(f"  vertex {u} {rule.seed.vertices[u]}")
    for eid in _sorted_ids(rule.seed.edges):
        e = rule.seed.edges[eid]
        out.append(f"  edge {eid} {e.symbol} {e.a} {e.b}")
    out.append("end")
    return "\n".join(out) + "\n"


def parse_history(text: str) -> HistoryGraph:
    """Read a history document.  Structural problems (double predecessors and
    the like) are kept so that check_axioms can report them."""
    lines = _tokenize(text)
    if not lines:
        raise RuleSyntaxError(0, 0, "empty document")
    head = lines[0]
    if head[0].text != "history":
        raise RuleSyntaxError(head[0].line, head[0].col, "history documents start with 'history <origin symbol>'")
    _expect(head, 2, "history")
    origin = head[1].text
    levels, vertical, eparent = [], [], {}
    cur = None
    for toks in lines[1:]:
        kw = toks[0]
        if kw.text == "level":
            _expect(toks, 2, "level")
            n = int(toks[1].text) if toks[1].text.isdigit() else -1
            if n != len(levels):
                raise RuleSyntaxError(toks[1].line, toks[1].col, f"expected level {len(levels)}")
            cur = ({}, {}, kw)
            levels.append(cur)
        elif kw.text in ("vertex", "edge"):
            if cur is None:
                raise RuleSyntaxError(kw.line, kw.col, f"{kw.text} before the first level")
            if kw.text == "vertex":
                _expect(toks, 3, "vertex")
                cur[0][toks[1].text] = toks[2].text
            else:
                _expect(toks, 5, "edge")
                cur[1][toks[1].text] = Edge(toks[2].text, toks[3].text, toks[4].text)
        elif kw.text == "pred":
            _expect(toks, 3, "pred")
            vertical.append((toks[1].text, toks[2].text))
        elif kw.text == "edge-parent":
            _expect(toks, 3, "edge-parent")
            eparent[toks[1].text] = toks[2].text
        else:
            raise RuleSyntaxError(kw.line, kw.col, f"unknown keyword {kw.text!r}")
    if not levels:
        raise RuleSyntaxError(head[0].line, head[0].col, "no levels")
    graphs = tuple(_graph(v, e, t) for v, e, t in levels)
    return HistoryGraph(graphs, tuple(vertical), eparent, origin)


def render_history(h: HistoryGraph) -> str:
    out = [f"history {h.origin_symbol}"]
    for n, g in enumerate(h.levels):
        out.append(f"level {n}")
        for v in _sorted_ids(g.vertices):
            out.append(f"  vertex {v} {g.vertices[v]}")
        for eid in _sorted_ids(g.edges):
            e = g.edges[eid]
            out.append(f"  edge {eid} {e.symbol} {e.a} {e.b}")
    for c, p in sorted(h.vertical, key=lambda cp: (len(cp[0]), cp)):
        out.append(f"pred {c} {p}")
    for c in _sorted_ids(h.edge_parent):
        out.append(f"edge-parent {c} {h.edge_parent[c]}")
    return "\n".join(out) + "\n"


def looks_like_history(text: str) -> bool:
    for raw in text.splitlines():
        s = _strip_comment(raw).strip()
        if s:
            return s.split()[0] == "history"
    return False


# planar JSON

def rule2d_to_dict(rule: SubdivisionRule2D) -> dict:
    return {
        "edge_types": {k: {"children": list(e.children), "color": e.color}
                       for k, e in sorted(rule.edge_types.items())},
        "tile_types": {
            k: {
                "sides": [list(s) for s in t.sides],
                "color": t.color,
                "layout": {
                    "subtiles": [list(s) for s in t.layout.subtiles],
                    "gluings": [{"id": g.id, "a": list(g.a), "b": list(g.b), "reversed": g.reversed}
                                for g in t.layout.gluings],
                    "boundary": [[sub, side, ps, idx]
                                 for (sub, side), (ps, idx) in sorted(t.layout.boundary.items())],
                },
            }
            for k, t in sorted(rule.tile_types.items())
        },
    }


def rule2d_from_dict(d: dict) -> SubdivisionRule2D:
    edges = {k: EdgeType2D(k, tuple(v["children"]), v["color"]) for k, v in d["edge_types"].items()}
    tiles = {}
    for k, v in d["tile_types"].items():
        lay = v["layout"]
        layout = TileLayout(
            tuple(tuple(s) for s in lay["subtiles"]),
            tuple(LayoutGluing(g["id"], tuple(g["a"]), tuple(g["b"]), g.get("reversed", True))
                  for g in lay["gluings"]),
            {(sub, side): (ps, idx) for sub, side, ps, idx in lay["boundary"]},
        )
        tiles[k] = TileType2D(k, tuple(tuple(s) for s in v["sides"]), v["color"], layout)
    return SubdivisionRule2D(edges, tiles)


def surface_to_dict(x: Surface2D) -> dict:
    return {
        "tiles": dict(sorted(x.tiles.items())),
        "gluings": {k: {"a": list(g.a), "b": list(g.b), "reversed": g.reversed}
                    for k, g in sorted(x.gluings.items())},
        "ideal": sorted(x.ideal),
    }


def surface_from_dict(d: dict) -> Surface2D:
    gl = {k: Gluing(tuple(g["a"]), tuple(g["b"]), g.get("reversed", True)) for k, g in d["gluings"].items()}
    return Surface2D(dict(d["tiles"]), gl, frozenset(d.get("ideal", ())))


def dumps(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=True) + "\n"
