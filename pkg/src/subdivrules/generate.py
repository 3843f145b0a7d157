"""Seeded random combinatorial rules for property tests."""
from __future__ import annotations

import random
import string
from collections import defaultdict
from dataclasses import dataclass

from .graphs import Edge, LabeledGraph
from .rules import CombRule, LabelAlphabet, Stub, VertexRule, validate_rule


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class RuleBounds:
    vertex_symbols: int = 2
    edge_symbols: int = 2
    max_degree: int = 3
    max_copies: int = 3      # seed vertices per vertex symbol
    max_children: int = 3
    max_edge_children: int = 3
    retries: int = 400


def random_rule(seed: int, bounds: RuleBounds = RuleBounds()) -> CombRule:
    """A valid rule drawn deterministically from ``seed``.

    The seed level comes first (random half-edge matchings), signatures are
    read off it, then edge rules, then vertex rules whose stubs are placed on
    free child half-edges so every bijection holds by construction.
    """
    if min(bounds.vertex_symbols, bounds.edge_symbols, bounds.max_degree,
           bounds.max_copies, bounds.max_children) < 1 or bounds.max_edge_children < 0:
        raise ValueError("bounds must be positive")
    rng = random.Random(seed)
    nv = rng.randint(1, bounds.vertex_symbols)
    ne = rng.randint(1, bounds.edge_symbols)
    V = tuple(string.ascii_lowercase[:nv])
    E = tuple(f"{c}" for c in "hkmnpqrstuwxyz"[:ne])

    for _ in range(bounds.retries):
        seed_graph, signatures = _random_seed(rng, V, E, bounds)
        if seed_graph is None:
            continue
        for _ in range(bounds.retries // 10 + 1):
            edge_rules = {e: tuple(rng.choice(E) for _ in range(rng.randint(0, bounds.max_edge_children)))
                          for e in E}
            vrules = {}
            for v in V:
                vr = _random_vertex_rule(rng, v, V, signatures, edge_rules, bounds)
                if vr is None:
                    break
                vrules[v] = vr
            else:
                rule = CombRule(LabelAlphabet(V, E), signatures, vrules, edge_rules, seed_graph)
                report = validate_rule(rule)
                if not report.ok:  # pragma: no cover - construction guarantees validity
                    raise GenerationError(f"seed {seed}: generated an invalid rule: {report.violations}")
                return rule
    raise GenerationError(f"seed {seed}: no rule within {bounds.retries} attempts")


def _random_seed(rng, V, E, bounds):
    signatures = {
        v: tuple(sorted(rng.choice(E) for _ in range(rng.randint(1, bounds.max_degree)))) for v in V
    }
    if {e for sig in signatures.values() for e in sig} != set(E):
        return None, None
    verts = {}
    halves = defaultdict(list)
    n = 0
    for v in V:
        for _ in range(rng.randint(1, bounds.max_copies)):
            n += 1
            verts[str(n)] = v
            for e in signatures[v]:
                halves[e].append(str(n))
    edges = {}
    k = 0
    for e in E:
        hs = halves[e]
        if len(hs) % 2:
            return None, None
        for _ in range(20):
            rng.shuffle(hs)
            pairs = list(zip(hs[::2], hs[1::2]))
            if all(a != b for a, b in pairs):
                break
        else:
            return None, None
        for a, b in pairs:
            k += 1
            edges[f"e{k}"] = Edge(e, a, b)
    return LabeledGraph(verts, edges), signatures


def _random_vertex_rule(rng, v, V, signatures, edge_rules, bounds):
    demands = [(i, j, f) for i, e in enumerate(signatures[v], 1) for j, f in enumerate(edge_rules[e], 1)]
    for _ in range(60):
        m = rng.randint(1, bounds.max_children)
        kids = {f"c{x}": rng.choice(V) for x in range(1, m + 1)}
        free = defaultdict(list)
        for c, s in kids.items():
            for f in signatures[s]:
                free[f].append(c)
        for f in free:
            rng.shuffle(free[f])
        stubs = []
        ok = True
        for i, j, f in demands:
            if not free[f]:
                ok = False
                break
            stubs.append(Stub(free[f].pop(), i, j))
        if not ok:
            continue
        interior = {}
        n = 0
        for f in sorted(free):
            hs = free[f]
            if len(hs) % 2:
                ok = False
                break
            for _ in range(10):
                rng.shuffle(hs)
                pairs = list(zip(hs[::2], hs[1::2]))
                if all(a != b for a, b in pairs):
                    break
            else:
                ok = False
                break
            for a, b in pairs:
                n += 1
                interior[f"i{n}"] = Edge(f, a, b)
        if ok:
            return VertexRule(v, LabeledGraph(kids, interior), tuple(stubs))
    return None
