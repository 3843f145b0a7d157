"""Checking the five axioms on a finite history-graph prefix, label refinement,
and reading a rule back off a history graph."""
from __future__ import annotations

import itertools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .graphs import FREE, Edge, GraphError, LabeledGraph, canonical_form, preimage_fragments
from .rules import (
    CombRule,
    HistoryGraph,
    LabelAlphabet,
    Stub,
    VertexRule,
    assign_slots,
    expand_level,
)

log = logging.getLogger(__name__)


@dataclass
class ConditionResult:
    number: int
    ok: bool
    detail: str = ""
    witness: Optional[tuple] = None
    level: Optional[int] = None


@dataclass
class AxiomReport:
    results: list[ConditionResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def condition(self, n: int) -> ConditionResult:
        return self.results[n - 1]

    def failed(self) -> list[int]:
        return [r.number for r in self.results if not r.ok]

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            status = "ok" if r.ok else "FAIL"
            out.append(f"condition {r.number}: {status}" + (f" - {r.detail}" if r.detail else ""))
        return out


class AxiomError(ValueError):
    def __init__(self, report: AxiomReport):
        self.report = report
        super().__init__("history graph fails the axioms:\n  " + "\n  ".join(report.lines()))


class InferenceError(ValueError):
    pass


def _star_key(g: LabeledGraph, v: str):
    # an open star is determined up to isomorphism by its centre symbol and edge-symbol multiset
    return g.vertices[v], tuple(sorted(g.edges[e].symbol for e in g.incident[v]))


_star_cache: dict = {}


def star_certificate(g: LabeledGraph, v: str) -> bytes:
    key = _star_key(g, v)
    cert = _star_cache.get(key)
    if cert is None:
        star = LabeledGraph({"v": key[0]}, {f"e{i}": Edge(s, "v", FREE) for i, s in enumerate(key[1])})
        cert = _star_cache[key] = canonical_form(star)
    return cert


def _first_mismatch(groups):
    """groups: symbol -> list of (level, id, cert, info).  Same-level pairs are reported first."""
    for sym in sorted(groups):
        by_level = defaultdict(list)
        for item in groups[sym]:
            by_level[item[0]].append(item)
        for lvl in sorted(by_level):
            items = by_level[lvl]
            for other in items[1:]:
                if other[2] != items[0][2]:
                    return sym, items[0], other
    for sym in sorted(groups):
        items = groups[sym]
        for other in items[1:]:
            if other[2] != items[0][2]:
                return sym, items[0], other
    return None


def check_axioms(h: HistoryGraph) -> AxiomReport:
    rep = AxiomReport()
    lv0 = h.levels[0]
    if len(lv0.vertices) == 1 and not lv0.edges and next(iter(lv0.vertices.values())) == h.origin_symbol:
        rep.results.append(ConditionResult(1, True))
    else:
        rep.results.append(ConditionResult(
            1, False, f"level 0 has {len(lv0.vertices)} vertices; expected the single origin", level=0))

    seen = Counter(v for g in h.levels for v in g.vertices)
    dup = sorted(v for v, c in seen.items() if c > 1)
    stray = sorted({x for pair in h.vertical for x in pair if x not in seen})
    if dup:
        rep.results.append(ConditionResult(2, False, f"vertex {dup[0]} lies in several levels", (dup[0],)))
    elif stray:
        rep.results.append(ConditionResult(2, False, f"vertical edge names unknown vertex {stray[0]}", (stray[0],)))
    else:
        rep.results.append(ConditionResult(2, True))

    level_of = h.level_of
    parents = defaultdict(list)
    for c, p in h.vertical:
        parents[c].append(p)
    c3 = ConditionResult(3, True)
    for n, g in enumerate(h.levels):
        for v in g.vertices:
            ps = parents.get(v, [])
            if n == 0:
                if ps:
                    c3 = ConditionResult(3, False, f"origin {v} has a predecessor", (v,), 0)
            elif len(ps) != 1:
                c3 = ConditionResult(3, False, f"vertex {v} at level {n} has {len(ps)} predecessors", (v, *ps), n)
            elif level_of.get(ps[0]) != n - 1:
                c3 = ConditionResult(3, False, f"predecessor {ps[0]} of {v} is not one level down", (v, ps[0]), n)
            if not c3.ok:
                break
        if not c3.ok:
            break
    rep.results.append(c3)

    groups = defaultdict(list)
    for n, g in enumerate(h.levels[1:], 1):
        for v in g.vertices:
            groups[g.vertices[v]].append((n, v, star_certificate(g, v), g.degree(v)))
    bad = _first_mismatch(groups)
    if bad is None:
        rep.results.append(ConditionResult(4, True))
    else:
        sym, a, b = bad
        rep.results.append(ConditionResult(
            4, False,
            f"symbol {sym}: star of {a[1]} (level {a[0]}, degree {a[3]}) differs from "
            f"star of {b[1]} (level {b[0]}, degree {b[3]})",
            (a[1], b[1]), b[0]))

    if not (rep.condition(1).ok and rep.condition(2).ok and c3.ok):
        rep.results.append(ConditionResult(5, False, "not checked: conditions 1-3 fail"))
        return rep
    rep.results.append(_condition5(h))
    return rep


def _condition5(h: HistoryGraph) -> ConditionResult:
    pred = h.pred
    vgroups, egroups = defaultdict(list), defaultdict(list)
    for n in range(1, len(h.levels) - 1):
        parent, child = h.levels[n], h.levels[n + 1]
        try:
            by_v, by_e = preimage_fragments(parent, child, pred, h.edge_parent)
        except GraphError as exc:
            return ConditionResult(5, False, f"predecessor map is not a graph morphism: {exc}", level=n + 1)
        for u, frag in by_v.items():
            vgroups[parent.vertices[u]].append((n, u, canonical_form(frag), len(frag.vertices)))
        for eid, frag in by_e.items():
            egroups[parent.edges[eid].symbol].append((n, eid, canonical_form(frag), len(frag.vertices)))
    bad = _first_mismatch(vgroups)
    if bad is not None:
        sym, a, b = bad
        return ConditionResult(5, False,
                               f"symbol {sym}: subdivision of {a[1]} (level {a[0]}) differs from "
                               f"subdivision of {b[1]} (level {b[0]})", (a[1], b[1]), b[0])
    bad = _first_mismatch(egroups)
    if bad is not None:
        sym, a, b = bad
        return ConditionResult(5, False,
                               f"edge symbol {sym}: subdivision of {a[1]} (level {a[0]}) differs from "
                               f"subdivision of {b[1]} (level {b[0]})", (a[1], b[1]), b[0])
    return ConditionResult(5, True)


def edge_preimages(h: HistoryGraph):
    """Yield ``(level, parent edge id, fragment)`` for every horizontal edge below the top level."""
    pred = h.pred
    for n in range(1, len(h.levels) - 1):
        _, by_e = preimage_fragments(h.levels[n], h.levels[n + 1], pred, h.edge_parent)
        for eid, frag in by_e.items():
            yield n, eid, frag


# -- label refinement --------------------------------------------------------

def refine_labels(h: HistoryGraph, max_rounds: int = 100) -> HistoryGraph:
    """Coarsest refinement of the labels under which same-label stars and
    subdivisions agree on the whole prefix.

    Top-level cells have no visible subdivision.  One joins the lower-level
    class with the same label and star when that class is unique, and gets a
    class of its own otherwise.
    """
    top = len(h.levels) - 1
    cur = h
    classes = _count_classes(h)
    for _ in range(max_rounds):
        pred = cur.pred
        vkey, ekey = {}, {}
        vsub, esub = defaultdict(set), defaultdict(set)
        for n in range(1, top):
            by_v, by_e = preimage_fragments(cur.levels[n], cur.levels[n + 1], pred, cur.edge_parent)
            g = cur.levels[n]
            for v, s in g.vertices.items():
                head = (s, star_certificate(g, v))
                vkey[v] = head + (canonical_form(by_v[v]),)
                vsub[head].add(vkey[v][2])
            for eid, e in g.edges.items():
                head = (e.symbol, tuple(sorted((g.vertices[e.a], g.vertices[e.b]))))
                ekey[(n, eid)] = head + (canonical_form(by_e[eid]),)
                esub[head].add(ekey[(n, eid)][2])
        if top >= 1:
            g = cur.levels[top]
            for v, s in g.vertices.items():
                head = (s, star_certificate(g, v))
                subs = vsub.get(head, ())
                vkey[v] = head + (next(iter(subs)) if len(subs) == 1 else b"",)
            for eid, e in g.edges.items():
                head = (e.symbol, tuple(sorted((g.vertices[e.a], g.vertices[e.b]))))
                subs = esub.get(head, ())
                ekey[(top, eid)] = head + (next(iter(subs)) if len(subs) == 1 else b"",)
        nxt = cur.with_symbols(_rename(vkey), _rename(ekey))
        count = _count_classes(nxt)
        cur = nxt
        if count == classes:
            return cur
        classes = count
    log.warning("label refinement did not settle within %d rounds", max_rounds)
    return cur


def _rename(keys):
    per_old = defaultdict(set)
    for k in keys.values():
        per_old[k[0]].add(k)
    names = {}
    for old, ks in per_old.items():
        ks = sorted(ks)
        if len(ks) == 1:
            names[ks[0]] = old
        else:
            for i, k in enumerate(ks, 1):
                names[k] = f"{old}.{i}"
    return {x: names[k] for x, k in keys.items()}


def _count_classes(h):
    vs = {s for g in h.levels[1:] for s in g.vertices.values()}
    es = {e.symbol for g in h.levels for e in g.edges.values()}
    return len(vs), len(es)


# -- rule inference ----------------------------------------------------------

def infer_rule(h: HistoryGraph, budget: int = 2000) -> CombRule:
    """Read a combinatorial rule off a history graph satisfying the axioms.

    Signatures, edge rules and vertex interiors come from one representative
    per symbol.  Where an edge rule repeats a child symbol, which stub takes
    which index is not visible locally; candidates are tried until one
    re-expands to the given levels (up to isomorphism).  If none does within
    ``budget`` candidates the first is returned with a warning.
    """
    report = check_axioms(h)
    if not report.ok:
        raise AxiomError(report)
    top = len(h.levels) - 1
    if top < 2:
        raise InferenceError("need at least two levels below the origin")

    reps_v, reps_e = {}, {}
    for n in range(1, top + 1):
        g = h.levels[n]
        for v, s in g.vertices.items():
            if s not in reps_v and n < top:
                reps_v[s] = (n, v)
        for eid, e in g.edges.items():
            if e.symbol not in reps_e and n < top:
                reps_e[e.symbol] = (n, eid)
    vsyms = sorted({s for g in h.levels[1:] for s in g.vertices.values()})
    esyms = sorted({e.symbol for g in h.levels for e in g.edges.values()})
    missing = [s for s in vsyms if s not in reps_v] + [s for s in esyms if s not in reps_e]
    if missing:
        raise InferenceError(f"symbols {missing} only occur on the top level; no rule can be read for them")

    signatures = {}
    for s, (n, v) in reps_v.items():
        g = h.levels[n]
        signatures[s] = tuple(sorted(g.edges[e].symbol for e in g.incident[v]))

    pred = h.pred
    frags = {}
    for n in {n for n, _ in reps_v.values()} | {n for n, _ in reps_e.values()}:
        frags[n] = _crossing_by_parent(h, n, pred)

    edge_rules = {}
    for e, (n, eid) in reps_e.items():
        edge_rules[e] = tuple(sorted(h.levels[n + 1].edges[c].symbol for c in frags[n][eid]))

    slot_cache = {}
    pieces = {}
    for s in vsyms:
        n, u = reps_v[s]
        if n not in slot_cache:
            slot_cache[n] = assign_slots(h.levels[n], signatures)
        pieces[s] = _vertex_pieces(h, n, u, slot_cache[n][u], frags[n], edge_rules)

    # choice groups: (symbol, slot, child symbol) -> crossing stubs, one free permutation each
    groups = []
    fixed_edge_syms = set()
    for s in vsyms:
        for i, (esym, by_child_sym) in enumerate(pieces[s]["slots"], 1):
            for fsym in sorted(by_child_sym):
                members = by_child_sym[fsym]
                if len(members) > 1 and esym in fixed_edge_syms:
                    groups.append((s, i, fsym, members))
            fixed_edge_syms.add(esym)

    alphabet = LabelAlphabet(tuple(vsyms), tuple(esyms), h.origin_symbol)
    targets = [canonical_form(g) for g in h.levels[1:]]
    first = None
    choices = [itertools.permutations(range(len(m))) for *_, m in groups]
    for k, combo in enumerate(itertools.product(*choices)):
        perms = {(s, i, f): p for (s, i, f, _), p in zip(groups, combo)}
        rule = _assemble(alphabet, signatures, edge_rules, pieces, perms, h.levels[1])
        if first is None:
            first = rule
        if _reproduces(rule, targets):
            return rule
        if k + 1 >= budget:
            break
    log.warning("no stub assignment reproduced the levels exactly; returning the first candidate")
    return first


def _crossing_by_parent(h, n, pred):
    parent, child = h.levels[n], h.levels[n + 1]
    out = defaultdict(list)
    by_ends = defaultdict(list)
    for eid, e in parent.edges.items():
        by_ends[frozenset((e.a, e.b))].append(eid)
    for cid, e in child.edges.items():
        pa, pb = pred[e.a], pred[e.b]
        if pa == pb:
            continue
        if cid in h.edge_parent:
            out[h.edge_parent[cid]].append(cid)
        else:
            for peid in by_ends[frozenset((pa, pb))]:
                out[peid].append(cid)
    return out


def _vertex_pieces(h, n, u, slots, crossing, edge_rules):
    parent, child = h.levels[n], h.levels[n + 1]
    pred = h.pred
    kids = sorted(c for c in child.vertices if pred.get(c) == u)
    names = {c: f"c{i}" for i, c in enumerate(kids, 1)}
    kidset = set(kids)
    interior = {}
    k = 0
    for cid, e in child.edges.items():
        if e.a in kidset and e.b in kidset:
            k += 1
            interior[f"i{k}"] = Edge(e.symbol, names[e.a], names[e.b])
    slot_pieces = []
    for peid in slots:
        esym = parent.edges[peid].symbol
        by_sym = defaultdict(list)
        for cid in sorted(crossing.get(peid, [])):
            e = child.edges[cid]
            mine = e.a if e.a in kidset else e.b
            by_sym[e.symbol].append(names[mine])
        for f in by_sym:
            by_sym[f].sort()
        slot_pieces.append((esym, dict(by_sym)))
    return {
        "interior": LabeledGraph({names[c]: child.vertices[c] for c in kids}, interior),
        "slots": slot_pieces,
    }


def _assemble(alphabet, signatures, edge_rules, pieces, perms, seed):
    vrules = {}
    for s, piece in pieces.items():
        stubs = []
        for i, (esym, by_sym) in enumerate(piece["slots"], 1):
            positions = defaultdict(list)
            for j, f in enumerate(edge_rules[esym], 1):
                positions[f].append(j)
            for f, members in by_sym.items():
                order = perms.get((s, i, f), range(len(members)))
                for pos, m in zip(positions[f], (members[x] for x in order)):
                    stubs.append(Stub(m, i, pos))
        vrules[s] = VertexRule(s, piece["interior"], tuple(sorted(stubs, key=lambda t: (t.slot, t.index))))
    return CombRule(alphabet, dict(sorted(signatures.items())), vrules, dict(sorted(edge_rules.items())), seed)


def _reproduces(rule, targets) -> bool:
    level = rule.seed
    if canonical_form(level) != targets[0]:
        return False
    for target in targets[1:]:
        level = expand_level(level, rule).graph
        if canonical_form(level) != target:
            return False
    return True
