"""Symbolic three-dimensional subdivision pairs built from a combinatorial rule.

Every vertex symbol becomes a ball, every edge symbol a boundary disk shared
by the balls whose signature mentions it.  The subdivided complex places one
child ball per interior vertex of the vertex rule inside each ball, glues
children along interior disks and matches their exterior disks to the
subdisks of each refined boundary disk.  Ideal parts (the rest of each
sphere, the complement of the child balls, the attached blocks) are kept as
single symbolic cells; they never touch the history graph.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .graphs import Edge, LabeledGraph, are_isomorphic, canonical_form
from .rules import (
    ORIGIN,
    CombRule,
    HistoryGraph,
    RuleError,
    assign_slots,
    build_history,
    origin_level,
    validate_rule,
)

BALL = "Ball3"
BOUNDARY_DISK = "BoundaryDisk"
SUB_DISK = "SubDisk"
INTERIOR_DISK = "InteriorDisk"
IDEAL_SPHERE = "IdealSphereRegion"
IDEAL_REMAINDER = "IdealDiskRemainder"
IDEAL_BLOCK = "IdealBlock"
IDEAL_COMPLEMENT = "IdealComplement"

NONIDEAL_KINDS = frozenset({BALL, BOUNDARY_DISK, SUB_DISK, INTERIOR_DISK})
_SOLID = frozenset({BALL, IDEAL_BLOCK, IDEAL_COMPLEMENT})


@dataclass(frozen=True)
class Cell3:
    id: str
    kind: str
    symbol: str
    index: Optional[int] = None   # child index of a SubDisk
    owner: Optional[str] = None   # vertex symbol whose subdivision holds the cell
    local: Optional[str] = None   # id inside the owner's vertex rule

    @property
    def ideal(self) -> bool:
        return self.kind not in NONIDEAL_KINDS

    @property
    def dim(self) -> int:
        return 3 if self.kind in _SOLID else 2


@dataclass
class Complex3:
    cells: dict[str, Cell3] = field(default_factory=dict)
    # (3-cell, 2-cell, slot or None): the disk lies on the ball's boundary
    incidences: list[tuple[str, str, Optional[int]]] = field(default_factory=list)
    # (id, disk, disk, orientation-preserving flag)
    identifications: list[tuple[str, str, str, bool]] = field(default_factory=list)
    # (owner symbol, slot, child index, child ball): exterior disk matched to a subdisk
    exterior: list[tuple[str, int, int, str]] = field(default_factory=list)
    # (ideal block, cell, "outer" | "inner")
    attachments: list[tuple[str, str, str]] = field(default_factory=list)

    def add(self, cell: Cell3) -> str:
        if cell.id in self.cells:
            raise ValueError(f"duplicate cell id {cell.id}")
        self.cells[cell.id] = cell
        return cell.id

    def of_kind(self, kind: str, symbol: Optional[str] = None) -> list[Cell3]:
        return [c for c in self.cells.values() if c.kind == kind and (symbol is None or c.symbol == symbol)]

    def problems(self) -> list[str]:
        out = []
        per_disk = defaultdict(set)
        for ball, disk, _ in self.incidences:
            for x in (ball, disk):
                if x not in self.cells:
                    out.append(f"incidence names unknown cell {x}")
            if ball in self.cells and self.cells[ball].dim != 3:
                out.append(f"incidence ({ball}, {disk}): first cell is not 3-dimensional")
            per_disk[disk].add(ball)
        for _, a, b, _ in self.identifications:
            if a == b:
                out.append(f"disk {a} identified with itself")
            elif a in self.cells and b in self.cells:
                ca, cb = self.cells[a], self.cells[b]
                if (ca.kind, ca.symbol) != (cb.kind, cb.symbol):
                    out.append(f"identification {a} ~ {b} joins different kinds or symbols")
        return out


@dataclass
class CellularMap:
    source: Complex3
    target: Complex3
    assoc: dict[str, str]

    def problems(self) -> list[str]:
        out = []
        for cid, cell in self.source.cells.items():
            if cid not in self.assoc:
                out.append(f"{cid} is not mapped")
                continue
            img = self.target.cells.get(self.assoc[cid])
            if img is None:
                out.append(f"{cid} maps to unknown cell {self.assoc[cid]}")
                continue
            if img.dim != cell.dim:
                out.append(f"{cid} ({cell.dim}-cell) maps to a {img.dim}-cell")
            if img.ideal != cell.ideal:
                out.append(f"{cid} ({'ideal' if cell.ideal else 'non-ideal'}) maps across colours")
        target_inc = {(a, b) for a, b, _ in self.target.incidences}
        for a, b, _ in self.source.incidences:
            if a in self.assoc and b in self.assoc and (self.assoc[a], self.assoc[b]) not in target_inc:
                out.append(f"incidence ({a}, {b}) is not preserved")
        return out


@dataclass
class Pair3D:
    base: Complex3
    subdivided: Complex3
    phi: CellularMap
    seed_complex: Complex3
    structure: CellularMap


def _require_valid(rule):
    report = validate_rule(rule)
    if not report.ok:
        raise RuleError(report)


def build_base_complex(rule: CombRule) -> Complex3:
    _require_valid(rule)
    cx = Complex3()
    for e in rule.alphabet.edge_symbols:
        cx.add(Cell3(f"D:{e}", BOUNDARY_DISK, e))
    for v in rule.alphabet.vertex_symbols:
        ball = cx.add(Cell3(f"B:{v}", BALL, v))
        sphere = cx.add(Cell3(f"S:{v}", IDEAL_SPHERE, v))
        cx.incidences.append((ball, sphere, None))
        for i, e in enumerate(rule.signatures[v], 1):
            cx.incidences.append((ball, f"D:{e}", i))
    for v in rule.alphabet.vertex_symbols:
        block = cx.add(Cell3(f"I:{v}", IDEAL_BLOCK, v))
        cx.attachments.append((block, f"S:{v}", "outer"))
        for w in sorted(set(rule.vertex_rules[v].interior.vertices.values())):
            cx.attachments.append((block, f"B:{w}", "inner"))
    return cx


def build_subdivided_complex(rule: CombRule) -> tuple[Complex3, CellularMap]:
    base = build_base_complex(rule)
    cx = Complex3()
    phi = {}
    for v in rule.alphabet.vertex_symbols:
        cx.add(Cell3(f"S:{v}", IDEAL_SPHERE, v))
        phi[f"S:{v}"] = f"S:{v}"
        cx.add(Cell3(f"I:{v}", IDEAL_BLOCK, v))
        phi[f"I:{v}"] = f"I:{v}"
    for e in rule.alphabet.edge_symbols:
        for j, f in enumerate(rule.edge_rules[e], 1):
            cx.add(Cell3(f"SD:{e}/{j}", SUB_DISK, e, index=j))
            phi[f"SD:{e}/{j}"] = f"D:{f}"
        cx.add(Cell3(f"DR:{e}", IDEAL_REMAINDER, e))
        holders = [v for v in rule.alphabet.vertex_symbols if e in rule.signatures[v]]
        phi[f"DR:{e}"] = f"S:{(holders or list(rule.alphabet.vertex_symbols))[0]}"

    for v in rule.alphabet.vertex_symbols:
        vr = rule.vertex_rules[v]
        sig = rule.signatures[v]
        for c, w in vr.interior.vertices.items():
            ball = cx.add(Cell3(f"B:{v}/{c}", BALL, w, owner=v, local=c))
            sphere = cx.add(Cell3(f"S:{v}/{c}", IDEAL_SPHERE, w, owner=v, local=c))
            cx.incidences.append((ball, sphere, None))
            phi[ball] = f"B:{w}"
            phi[sphere] = f"S:{w}"
        for ie, e in vr.interior.edges.items():
            disk = cx.add(Cell3(f"ID:{v}/{ie}", INTERIOR_DISK, e.symbol, owner=v, local=ie))
            cx.incidences.append((f"B:{v}/{e.a}", disk, None))
            cx.incidences.append((f"B:{v}/{e.b}", disk, None))
            phi[disk] = f"D:{e.symbol}"
        seen = defaultdict(set)
        for st in vr.stubs:
            e = sig[st.slot - 1]
            sub = f"SD:{e}/{st.index}"
            if sub not in cx.cells:
                raise ValueError(f"vertex rule {v}: stub {tuple(st)} has no subdisk {sub}")
            seen[st.slot].add(st.index)
            cx.incidences.append((f"B:{v}/{st.child}", sub, None))
            cx.exterior.append((v, st.slot, st.index, f"B:{v}/{st.child}"))
        for i, e in enumerate(sig, 1):
            if seen[i] != set(range(1, len(rule.edge_rules[e]) + 1)):
                raise ValueError(f"vertex rule {v}: exterior disks of slot {i} do not match the subdisks of {e}")
        comp = cx.add(Cell3(f"C:{v}", IDEAL_COMPLEMENT, v, owner=v))
        phi[comp] = f"I:{v}"
    return cx, CellularMap(cx, base, phi)


def build_seed_complex(rule: CombRule) -> tuple[Complex3, CellularMap]:
    """One ball per seed vertex, one glued disk pair per seed edge."""
    base = build_base_complex(rule)
    seed = rule.seed
    slots = assign_slots(seed, rule.signatures)
    cx = Complex3()
    structure = {}
    for u, v in seed.vertices.items():
        ball = cx.add(Cell3(f"X:{u}", BALL, v))
        sphere = cx.add(Cell3(f"XS:{u}", IDEAL_SPHERE, v))
        cx.incidences.append((ball, sphere, None))
        structure[ball] = f"B:{v}"
        structure[sphere] = f"S:{v}"
        for i, eid in enumerate(slots[u], 1):
            e = seed.edges[eid].symbol
            disk = cx.add(Cell3(f"X:{u}/{i}", BOUNDARY_DISK, e))
            cx.incidences.append((ball, disk, i))
            structure[disk] = f"D:{e}"
    for eid, e in seed.edges.items():
        ia = slots[e.a].index(eid) + 1
        ib = slots[e.b].index(eid) + 1
        cx.identifications.append((eid, f"X:{e.a}/{ia}", f"X:{e.b}/{ib}", True))
    return cx, CellularMap(cx, base, structure)


def complex_dual_graph(cx: Complex3) -> LabeledGraph:
    """Non-ideal balls, joined once per identified disk pair between two of them."""
    owner = {}
    for ball, disk, _ in cx.incidences:
        if cx.cells[ball].kind == BALL:
            owner[disk] = ball
    verts = {c.id.split(":", 1)[1]: c.symbol for c in cx.of_kind(BALL)}
    edges = {}
    for gid, a, b, _ in cx.identifications:
        ba, bb = owner.get(a), owner.get(b)
        if ba and bb and ba != bb:
            edges[gid] = Edge(cx.cells[a].symbol, ba.split(":", 1)[1], bb.split(":", 1)[1])
    return LabeledGraph(verts, edges)


def build_pair(rule: CombRule) -> Pair3D:
    base = build_base_complex(rule)
    sub, phi = build_subdivided_complex(rule)
    seed, structure = build_seed_complex(rule)
    return Pair3D(base, sub, phi, seed, structure)


def history_from_cells(pair: Pair3D, depth: int) -> HistoryGraph:
    """Pull the subdivided structure back level by level and read off dual graphs."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    base, sub, phi = pair.base, pair.subdivided, pair.phi.assoc

    signatures = defaultdict(list)
    for ball, disk, slot in base.incidences:
        if slot is not None:
            signatures[base.cells[ball].symbol].append((slot, base.cells[disk].symbol))
    signatures = {v: tuple(s for _, s in sorted(x)) for v, x in signatures.items()}
    for c in base.of_kind(BALL):
        signatures.setdefault(c.symbol, ())

    children = defaultdict(list)     # owner -> [(local, symbol)]
    for c in sub.of_kind(BALL):
        children[c.owner].append((c.local, sub.cells[c.id].symbol and base.cells[phi[c.id]].symbol))
    disk_balls = defaultdict(list)
    for ball, disk, _ in sub.incidences:
        if sub.cells[ball].kind == BALL:
            disk_balls[disk].append(sub.cells[ball].local)
    interior = defaultdict(list)     # owner -> [(local, symbol, child a, child b)]
    for c in sub.of_kind(INTERIOR_DISK):
        a, b = disk_balls[c.id]
        interior[c.owner].append((c.local, base.cells[phi[c.id]].symbol, a, b))
    subdisks = defaultdict(list)     # edge symbol -> [(j, image symbol)]
    for c in sub.of_kind(SUB_DISK):
        subdisks[c.symbol].append((c.index, base.cells[phi[c.id]].symbol))
    for v in subdisks:
        subdisks[v].sort()
    exterior = {(v, i, j): sub.cells[ball].local for v, i, j, ball in sub.exterior}

    level = complex_dual_graph(pair.seed_complex)
    levels = [origin_level(), level]
    vertical = [(u, ORIGIN) for u in level.vertices]
    eparent = {}
    while len(levels) <= depth:
        slots = assign_slots(level, signatures)
        slot_of = {(u, eid): i for u, eids in slots.items() for i, eid in enumerate(eids, 1)}
        verts, edges = {}, {}
        for u, v in level.vertices.items():
            for c, w in children[v]:
                verts[f"{u}/{c}"] = w
                vertical.append((f"{u}/{c}", u))
            for ie, f, a, b in interior[v]:
                edges[f"{u}/{ie}"] = Edge(f, f"{u}/{a}", f"{u}/{b}")
        for eid, e in level.edges.items():
            va, vb = level.vertices[e.a], level.vertices[e.b]
            ia, ib = slot_of[(e.a, eid)], slot_of[(e.b, eid)]
            for j, f in subdisks[e.symbol]:
                cid = f"{eid}#{j}"
                edges[cid] = Edge(f, f"{e.a}/{exterior[(va, ia, j)]}", f"{e.b}/{exterior[(vb, ib, j)]}")
                eparent[cid] = eid
        level = LabeledGraph(verts, edges)
        levels.append(level)
    return HistoryGraph(tuple(levels), tuple(vertical), eparent)


@dataclass
class VerificationReport:
    passed: bool
    levels: list[tuple[bytes, bytes]]
    first_failure: Optional[str] = None
    cell_problems: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = []
        for n, (a, b) in enumerate(self.levels):
            out.append(f"level {n}: {'match' if a == b else 'MISMATCH'}")
        out.extend(f"cells: {p}" for p in self.cell_problems)
        out.append("PASS" if self.passed else f"FAIL: {self.first_failure}")
        return out


def cell_count_problems(rule: CombRule, pair: Pair3D) -> list[str]:
    out = []
    base, sub = pair.base, pair.subdivided
    V, E = rule.alphabet.vertex_symbols, rule.alphabet.edge_symbols
    if len(base.of_kind(BALL)) != len(V):
        out.append("base: ball count differs from the number of vertex symbols")
    if len(base.of_kind(BOUNDARY_DISK)) != len(E):
        out.append("base: boundary disk count differs from the number of edge symbols")
    if len(base.of_kind(IDEAL_BLOCK)) != len(V):
        out.append("base: ideal block count differs from the number of vertex symbols")
    for e in E:
        if len(sub.of_kind(SUB_DISK, e)) != len(rule.edge_rules[e]):
            out.append(f"subdivided: {e} has {len(sub.of_kind(SUB_DISK, e))} subdisks, edge rule has {len(rule.edge_rules[e])}")
    for v in V:
        kids = [c for c in sub.of_kind(BALL) if c.owner == v]
        if len(kids) != len(rule.vertex_rules[v].interior.vertices):
            out.append(f"subdivided: {v} holds {len(kids)} child balls")
    out += [f"base: {p}" for p in base.problems()]
    out += [f"subdivided: {p}" for p in sub.problems()]
    out += [f"seed: {p}" for p in pair.seed_complex.problems()]
    out += [f"phi: {p}" for p in pair.phi.problems()]
    out += [f"structure: {p}" for p in pair.structure.problems()]
    seed_dual = complex_dual_graph(pair.seed_complex)
    if canonical_form(seed_dual) != canonical_form(rule.seed):
        out.append("seed complex: dual graph differs from the seed level")
    return out


def verify_realization(rule: CombRule, depth: int) -> VerificationReport:
    """Compare the cell-level history graph with the rule's own expansion.

    Levels must match by certificate and the whole leveled graphs must be
    isomorphic with vertical edges preserved, i.e. through level
    isomorphisms that commute with the predecessor maps.
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    pair = build_pair(rule)
    problems = cell_count_problems(rule, pair)
    cells = history_from_cells(pair, depth)
    expanded = build_history(rule, depth)
    certs = [(canonical_form(a), canonical_form(b)) for a, b in zip(cells.levels, expanded.levels)]
    for n, (a, b) in enumerate(certs):
        if a != b:
            return VerificationReport(False, certs, f"level {n} differs", problems)
    if are_isomorphic(cells.flatten(), expanded.flatten()) is None:
        return VerificationReport(False, certs, "no level isomorphism commutes with the predecessor maps", problems)
    if problems:
        return VerificationReport(False, certs, problems[0], problems)
    return VerificationReport(True, certs, None, problems)
