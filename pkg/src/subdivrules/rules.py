"""Combinatorial subdivision rules and their level-by-level expansion."""
from __future__ import annotations

import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from .graphs import FREE, Edge, GraphError, LabeledGraph, canonical_labeling

ORIGIN = "@"
_ID_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


class RuleError(ValueError):
    """Raised when a rule that fails validation is used for expansion."""

    def __init__(self, report):
        self.report = report
        super().__init__("invalid rule:\n  " + "\n  ".join(report.violations))


@dataclass(frozen=True)
class LabelAlphabet:
    vertex_symbols: tuple[str, ...]
    edge_symbols: tuple[str, ...]
    origin_symbol: str = "O"


class Stub(NamedTuple):
    """Child ``child`` carries the ``index``-th edge of the parent's ``slot``-th slot (both 1-based)."""

    child: str
    slot: int
    index: int


@dataclass(frozen=True)
class VertexRule:
    symbol: str
    interior: LabeledGraph
    stubs: tuple[Stub, ...]

    __hash__ = None

    def __post_init__(self):
        stubs = tuple(sorted((Stub(*s) for s in self.stubs), key=lambda s: (s.slot, s.index, s.child)))
        object.__setattr__(self, "stubs", stubs)

    def stub_map(self) -> dict[tuple[int, int], str]:
        return {(s.slot, s.index): s.child for s in self.stubs}


@dataclass(frozen=True)
class CombRule:
    alphabet: LabelAlphabet
    signatures: Mapping[str, tuple[str, ...]]
    vertex_rules: Mapping[str, VertexRule]
    edge_rules: Mapping[str, tuple[str, ...]]
    seed: LabeledGraph

    __hash__ = None


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _bad_id(s: str) -> bool:
    return not _ID_RE.match(s)


def validate_rule(rule: CombRule) -> ValidationReport:
    rep = ValidationReport()
    bad = rep.violations.append
    V = set(rule.alphabet.vertex_symbols)
    E = set(rule.alphabet.edge_symbols)
    origin = rule.alphabet.origin_symbol
    if not V:
        bad("alphabet: no vertex symbols")
    if not E:
        bad("alphabet: no edge symbols")
    if origin in V or origin in E:
        bad(f"alphabet: origin symbol {origin} reused as a tile symbol")
    for s in sorted(V | E):
        if _bad_id(s):
            bad(f"alphabet: symbol {s!r} is not a printable identifier")

    for v in sorted(V):
        if v not in rule.signatures:
            bad(f"symbol {v}: no signature")
        if v not in rule.vertex_rules:
            bad(f"symbol {v}: no vertex rule")
    for e in sorted(E):
        if e not in rule.edge_rules:
            bad(f"edge symbol {e}: no edge rule")
    for v, sig in sorted(rule.signatures.items()):
        if v not in V:
            bad(f"signature for unknown symbol {v}")
        for s in sig:
            if s not in E:
                bad(f"signature of {v}: edge symbol {s} not in alphabet")
    for e, kids in sorted(rule.edge_rules.items()):
        if e not in E:
            bad(f"edge rule for unknown symbol {e}")
        for s in kids:
            if s not in E:
                bad(f"edge rule {e}: child symbol {s} not in alphabet")
    if not rep.ok:
        return rep

    for v, vr in sorted(rule.vertex_rules.items()):
        if v not in V:
            bad(f"vertex rule for unknown symbol {v}")
            continue
        _validate_vertex_rule(rule, v, vr, bad)

    seed = rule.seed
    if not seed.vertices:
        bad("seed: empty")
    for u, s in seed.vertices.items():
        if _bad_id(u):
            bad(f"seed: vertex id {u!r} is not a printable identifier")
        if s not in V:
            bad(f"seed: vertex {u} has unknown symbol {s}")
            continue
        have = Counter(seed.edges[eid].symbol for eid in seed.incident[u])
        want = Counter(rule.signatures[s])
        if have != want:
            bad(
                f"seed: signature/degree mismatch at vertex {u} ({s}): "
                f"incident {sorted(have.elements())}, signature {list(rule.signatures[s])}"
            )
    for eid, e in seed.edges.items():
        if _bad_id(eid):
            bad(f"seed: edge id {eid!r} is not a printable identifier")
        if e.symbol not in E:
            bad(f"seed: edge {eid} has unknown symbol {e.symbol}")
        if FREE in (e.a, e.b):
            bad(f"seed: edge {eid} has an open end")
    return rep


def _validate_vertex_rule(rule, v, vr, bad):
    V = set(rule.alphabet.vertex_symbols)
    E = set(rule.alphabet.edge_symbols)
    inner = vr.interior
    if not inner.vertices:
        bad(f"vertex rule {v}: empty interior")
        return
    for c, s in inner.vertices.items():
        if _bad_id(c):
            bad(f"vertex rule {v}: child id {c!r} is not a printable identifier")
        if s not in V:
            bad(f"vertex rule {v}: child {c} has unknown symbol {s}")
    for eid, e in inner.edges.items():
        if _bad_id(eid):
            bad(f"vertex rule {v}: interior edge id {eid!r} is not a printable identifier")
        if e.symbol not in E:
            bad(f"vertex rule {v}: interior edge {eid} has unknown symbol {e.symbol}")
        if FREE in (e.a, e.b):
            bad(f"vertex rule {v}: interior edge {eid} has an open end")
    sig = rule.signatures[v]
    seen = Counter()
    for st in vr.stubs:
        if st.child not in inner.vertices:
            bad(f"vertex rule {v}: stub {tuple(st)} names unknown child {st.child}")
        if not 1 <= st.slot <= len(sig):
            bad(f"vertex rule {v}: stub {tuple(st)} has slot outside 1..{len(sig)}")
            continue
        seen[(st.slot, st.index)] += 1
    for i, e in enumerate(sig, 1):
        k = len(rule.edge_rules[e])
        got = sorted(j for (s, j) in seen.elements() if s == i)
        if got != list(range(1, k + 1)):
            bad(
                f"slot {i} of symbol {v}: {len(got)} stubs, "
                f"EdgeRule({e}) has {k} child{'ren' if k != 1 else ''}"
                + (f" (indices {got})" if got and len(got) == k else "")
            )
    # every child must end up with exactly its own signature
    carried = defaultdict(Counter)
    for eid, e in inner.edges.items():
        for end in (e.a, e.b):
            if end in inner.vertices:
                carried[end][e.symbol] += 1
    for st in vr.stubs:
        if st.child in inner.vertices and 1 <= st.slot <= len(sig):
            kids = rule.edge_rules[sig[st.slot - 1]]
            if 1 <= st.index <= len(kids):
                carried[st.child][kids[st.index - 1]] += 1
    for c, s in inner.vertices.items():
        if s in rule.signatures and carried[c] != Counter(rule.signatures[s]):
            bad(
                f"vertex rule {v}: child {c} ({s}) would carry {sorted(carried[c].elements())}, "
                f"signature is {list(rule.signatures[s])}"
            )


def assign_slots(level: LabeledGraph, signatures: Mapping[str, tuple[str, ...]]) -> dict[str, list[str]]:
    """Attach each vertex's incident edges to its signature slots.

    Edges of one symbol fill that symbol's slots in signature order, sorted
    by the canonical rank of the neighbour and then of the edge itself, so
    the attachment is an isomorphism invariant up to automorphisms.
    """
    needs_rank = any(
        len(set(signatures[s])) < len(signatures[s])
        for s in set(level.vertices.values()) if s in signatures
    )
    vrank, erank = canonical_labeling(level) if needs_rank else ({}, {})
    out = {}
    for u, s in level.vertices.items():
        if s not in signatures:
            raise GraphError(f"vertex {u}: no signature for symbol {s}")
        sig = signatures[s]
        by_sym = defaultdict(list)
        for eid in level.incident[u]:
            by_sym[level.edges[eid].symbol].append(eid)
        if Counter({k: len(x) for k, x in by_sym.items()}) != Counter(sig):
            raise GraphError(
                f"vertex {u} ({s}): incident symbols "
                f"{sorted(level.edges[e].symbol for e in level.incident[u])} do not match signature {list(sig)}"
            )
        for sym, eids in by_sym.items():
            eids.sort(key=lambda e: (vrank.get(level.other_end(e, u), 0), erank.get(e, 0), e))
        slots = []
        used = Counter()
        for sym in sig:
            slots.append(by_sym[sym][used[sym]])
            used[sym] += 1
        out[u] = slots
    return out


class Expansion(NamedTuple):
    graph: LabeledGraph
    pred: dict[str, str]
    edge_parent: dict[str, str]


def expand_level(level: LabeledGraph, rule: CombRule) -> Expansion:
    """Replace every vertex by its vertex subdivision and every edge by its edge subdivision.

    Child vertex ids are ``parent/child``, interior edge ids ``parent/edge``
    and crossing edge ids ``edge#j``.
    """
    slots = assign_slots(level, rule.signatures)
    slot_of = {}
    for u, eids in slots.items():
        for i, eid in enumerate(eids, 1):
            slot_of[(u, eid)] = i
    stub_maps = {s: vr.stub_map() for s, vr in rule.vertex_rules.items()}

    verts, edges, pred, eparent = {}, {}, {}, {}
    for u, s in level.vertices.items():
        vr = rule.vertex_rules[s]
        for c, cs in vr.interior.vertices.items():
            verts[f"{u}/{c}"] = cs
            pred[f"{u}/{c}"] = u
        for ie, e in vr.interior.edges.items():
            edges[f"{u}/{ie}"] = Edge(e.symbol, f"{u}/{e.a}", f"{u}/{e.b}")
    for eid, e in level.edges.items():
        ia, ib = slot_of[(e.a, eid)], slot_of[(e.b, eid)]
        sa, sb = stub_maps[level.vertices[e.a]], stub_maps[level.vertices[e.b]]
        for j, f in enumerate(rule.edge_rules[e.symbol], 1):
            cid = f"{eid}#{j}"
            edges[cid] = Edge(f, f"{e.a}/{sa[(ia, j)]}", f"{e.b}/{sb[(ib, j)]}")
            eparent[cid] = eid
    return Expansion(LabeledGraph(verts, edges), pred, eparent)


@dataclass(frozen=True)
class HistoryGraph:
    """Origin plus one horizontal graph per level, joined by vertical edges.

    ``vertical`` holds ``(child, parent)`` pairs; ``edge_parent`` optionally
    maps crossing edges to the horizontal edge they subdivide.
    """

    levels: tuple[LabeledGraph, ...]
    vertical: tuple[tuple[str, str], ...]
    edge_parent: Mapping[str, str] = field(default_factory=dict)
    origin_symbol: str = "O"

    __hash__ = None

    @property
    def origin(self) -> str:
        return next(iter(self.levels[0].vertices))

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def pred(self) -> dict[str, str]:
        return dict(self.vertical)

    @property
    def level_of(self) -> dict[str, int]:
        return {v: n for n, g in enumerate(self.levels) for v in g.vertices}

    def sizes(self) -> list[int]:
        return [len(g.vertices) for g in self.levels]

    def with_symbols(self, vsym: Mapping[str, str], esym: Mapping[tuple[int, str], str]) -> "HistoryGraph":
        levels = []
        for n, g in enumerate(self.levels):
            levels.append(LabeledGraph(
                {v: vsym.get(v, s) for v, s in g.vertices.items()},
                {eid: Edge(esym.get((n, eid), e.symbol), e.a, e.b) for eid, e in g.edges.items()},
            ))
        return HistoryGraph(tuple(levels), self.vertical, self.edge_parent, self.origin_symbol)

    def flatten(self) -> LabeledGraph:
        """One graph holding every level; vertex symbols are tagged with their level."""
        verts, edges = {}, {}
        for n, g in enumerate(self.levels):
            for v, s in g.vertices.items():
                verts[v] = f"{n}:{s}"
            for eid, e in g.edges.items():
                edges[f"{n}:{eid}"] = e
        for c, p in self.vertical:
            edges[f"|{c}|{p}"] = Edge("|", c, p)
        return LabeledGraph(verts, edges)


def origin_level(symbol: str = "O") -> LabeledGraph:
    return LabeledGraph({ORIGIN: symbol})


def build_history(rule: CombRule, depth: int) -> HistoryGraph:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    report = validate_rule(rule)
    if not report.ok:
        raise RuleError(report)
    levels = [origin_level(rule.alphabet.origin_symbol), rule.seed]
    vertical = [(v, ORIGIN) for v in rule.seed.vertices]
    eparent = {}
    while len(levels) <= depth:
        nxt = expand_level(levels[-1], rule)
        levels.append(nxt.graph)
        vertical.extend(nxt.pred.items())
        eparent.update(nxt.edge_parent)
    return HistoryGraph(tuple(levels), tuple(vertical), eparent, rule.alphabet.origin_symbol)
