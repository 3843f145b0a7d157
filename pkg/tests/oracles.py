"""Independent reference implementations used as test oracles.

Nothing here calls into the package's isomorphism code: the checks are
plain exhaustive searches over vertex bijections.
"""
from __future__ import annotations

import random
from collections import Counter

from subdivrules.graphs import FREE, Edge, LabeledGraph


def _between(g):
    """(x, y) -> Counter of edge symbols, with x <= y; FREE ends kept as FREE."""
    out = {}
    for e in g.edges.values():
        key = tuple(sorted((e.a, e.b)))
        out.setdefault(key, Counter())[e.symbol] += 1
    return out


def brute_isomorphic(g: LabeledGraph, h: LabeledGraph) -> bool:
    if Counter(g.vertices.values()) != Counter(h.vertices.values()):
        return False
    if Counter(e.symbol for e in g.edges.values()) != Counter(e.symbol for e in h.edges.values()):
        return False
    bg, bh = _between(g), _between(h)
    if bg.get((FREE, FREE), Counter()) != bh.get((FREE, FREE), Counter()):
        return False
    gv = list(g.vertices)
    hv = list(h.vertices)

    def mult(b, x, y):
        return b.get(tuple(sorted((x, y))), Counter())

    def extend(k, mapping, used):
        if k == len(gv):
            return True
        x = gv[k]
        for y in hv:
            if y in used or g.vertices[x] != h.vertices[y]:
                continue
            if mult(bg, x, FREE) != mult(bh, y, FREE):
                continue
            if any(mult(bg, x, x2) != mult(bh, y, mapping[x2]) for x2 in gv[:k]):
                continue
            mapping[x] = y
            used.add(y)
            if extend(k + 1, mapping, used):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return extend(0, {}, set())


def witness_ok(g: LabeledGraph, h: LabeledGraph, iso) -> bool:
    vm, em = iso.vertex_map, iso.edge_map
    if sorted(vm) != sorted(g.vertices) or sorted(vm.values()) != sorted(h.vertices):
        return False
    if sorted(em) != sorted(g.edges) or sorted(em.values()) != sorted(h.edges):
        return False
    if any(g.vertices[v] != h.vertices[w] for v, w in vm.items()):
        return False
    for eid, fid in em.items():
        e, f = g.edges[eid], h.edges[fid]
        ends = sorted(vm.get(x, FREE) for x in (e.a, e.b))
        if e.symbol != f.symbol or ends != sorted((f.a, f.b)):
            return False
    return True


def random_graph(rng: random.Random, max_vertices=8, vsyms="ab", esyms="hk", max_edges=10, open_p=0.1):
    n = rng.randint(0, max_vertices)
    verts = {f"v{i}": rng.choice(vsyms) for i in range(n)}
    ids = list(verts)
    edges = {}
    for k in range(rng.randint(0, max_edges)):
        ends = []
        for _ in range(2):
            ends.append(FREE if not ids or rng.random() < open_p else rng.choice(ids))
        if ends[0] == ends[1] and ends[0] != FREE:
            continue
        edges[f"e{k}"] = Edge(rng.choice(esyms), *ends)
    return LabeledGraph(verts, edges)


def relabel(g: LabeledGraph, rng: random.Random, prefix="x") -> LabeledGraph:
    """Same graph with shuffled, renamed vertex and edge ids."""
    vs = list(g.vertices)
    rng.shuffle(vs)
    vm = {v: f"{prefix}{i}" for i, v in enumerate(vs)}
    vm[FREE] = FREE
    es = list(g.edges)
    rng.shuffle(es)
    return LabeledGraph(
        {vm[v]: s for v, s in g.vertices.items()},
        {f"{prefix}e{i}": Edge(g.edges[eid].symbol, vm[g.edges[eid].a], vm[g.edges[eid].b]) for i, eid in enumerate(es)},
    )


def perturb(g: LabeledGraph, rng: random.Random) -> LabeledGraph:
    """Move one endpoint or flip one symbol; the result may or may not be isomorphic."""
    if not g.edges or len(g.vertices) < 2:
        return g
    edges = dict(g.edges)
    eid = rng.choice(sorted(edges))
    e = edges[eid]
    if rng.random() < 0.5:
        b = rng.choice([v for v in g.vertices if v != e.a] or [e.b])
        edges[eid] = Edge(e.symbol, e.a, b)
    else:
        edges[eid] = Edge("h" if e.symbol != "h" else "k", e.a, e.b)
    return LabeledGraph(dict(g.vertices), edges)


def graph_pairs(seed: int, count: int):
    rng = random.Random(seed)
    for i in range(count):
        g = random_graph(rng)
        kind = i % 3
        if kind == 0:
            h = relabel(g, rng)
        elif kind == 1:
            h = relabel(perturb(g, rng), rng)
        else:
            h = random_graph(rng)
        yield g, h


def permute_history_ids(h, rng: random.Random):
    """Rename every non-origin id of a history graph by a random bijection."""
    from subdivrules.rules import HistoryGraph

    vs = [v for g in h.levels[1:] for v in g.vertices]
    names = [f"n{i}" for i in range(len(vs))]
    rng.shuffle(names)
    vm = dict(zip(vs, names))
    vm[h.origin] = h.origin
    vm[FREE] = FREE
    levels = []
    em = {}
    for n, g in enumerate(h.levels):
        eids = list(g.edges)
        rng.shuffle(eids)
        for i, eid in enumerate(eids):
            em[eid] = f"l{n}e{i}"
        levels.append(LabeledGraph({vm[v]: s for v, s in g.vertices.items()},
                                   {em[eid]: Edge(e.symbol, vm[e.a], vm[e.b]) for eid, e in g.edges.items()}))
    vertical = tuple((vm[c], vm[p]) for c, p in h.vertical)
    eparent = {em[c]: em[p] for c, p in h.edge_parent.items()}
    return HistoryGraph(tuple(levels), vertical, eparent, h.origin_symbol)


def is_regular(g: LabeledGraph, k: int) -> bool:
    return all(g.degree(v) == k for v in g.vertices)
