"""Finite labeled multigraphs with open (FREE) edge ends.

Vertices and edges carry string symbols.  An edge end is either a vertex id
or the sentinel ``FREE``; a graph made only of doubly-open edges is a legal
value.  Self-loops are rejected, parallel edges are fine.

Isomorphism witnesses come from a colour-refinement backtracking search
written here; canonical certificates use bliss through python-igraph.
"""
from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

import igraph

FREE = "*"

EMPTY_CERTIFICATE = b"LG:empty"


class GraphError(ValueError):
    """Structural problem with a graph or a graph morphism."""


class Edge(NamedTuple):
    symbol: str
    a: str
    b: str


@dataclass(frozen=True)
class LabeledGraph:
    vertices: Mapping[str, str] = field(default_factory=dict)
    edges: Mapping[str, Edge] = field(default_factory=dict)

    def __post_init__(self):
        verts = {str(k): str(v) for k, v in self.vertices.items()}
        if FREE in verts:
            raise GraphError(f"{FREE!r} is reserved and cannot be a vertex id")
        edges = {}
        for eid, e in self.edges.items():
            e = Edge(*e)
            for end in (e.a, e.b):
                if end != FREE and end not in verts:
                    raise GraphError(f"edge {eid} references unknown vertex {end}")
            if e.a == e.b and e.a != FREE:
                raise GraphError(f"edge {eid} is a self-loop at {e.a}")
            edges[str(eid)] = e
        object.__setattr__(self, "vertices", dict(sorted(verts.items())))
        object.__setattr__(self, "edges", dict(sorted(edges.items())))

    __hash__ = None

    @classmethod
    def build(cls, vertices: Mapping[str, str] | Iterable, edges: Iterable = ()):
        """Build from ``{vid: sym}`` and ``(eid, sym, a, b)`` rows."""
        if not isinstance(vertices, Mapping):
            vertices = dict(vertices)
        return cls(vertices, {eid: Edge(sym, a, b) for eid, sym, a, b in edges})

    @cached_property
    def incident(self) -> dict[str, list[str]]:
        inc = {v: [] for v in self.vertices}
        for eid, e in self.edges.items():
            for end in (e.a, e.b):
                if end != FREE:
                    inc[end].append(eid)
        return inc

    @cached_property
    def adjacent_pairs(self) -> frozenset:
        return frozenset(
            frozenset((e.a, e.b)) for e in self.edges.values() if FREE not in (e.a, e.b)
        )

    def degree(self, v: str) -> int:
        return len(self.incident[v])

    def other_end(self, eid: str, v: str) -> str:
        e = self.edges[eid]
        return e.b if e.a == v else e.a

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"LabeledGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


@dataclass(frozen=True)
class LabeledIsomorphism:
    vertex_map: dict
    edge_map: dict

    __hash__ = None


def open_star(g: LabeledGraph, v: str) -> LabeledGraph:
    """The vertex ``v`` with every incident edge copied and opened at its far end."""
    if v not in g.vertices:
        raise GraphError(f"unknown vertex {v!r}")
    return LabeledGraph(
        {v: g.vertices[v]},
        {eid: Edge(g.edges[eid].symbol, v, FREE) for eid in g.incident[v]},
    )


def _check_morphism(parent: LabeledGraph, child: LabeledGraph, pred: Mapping[str, str]):
    for v in child.vertices:
        if v not in pred:
            raise GraphError(f"child vertex {v} has no predecessor")
        if pred[v] not in parent.vertices:
            raise GraphError(f"predecessor {pred[v]} of {v} is not a parent vertex")
    pairs = parent.adjacent_pairs
    for eid, e in child.edges.items():
        if FREE in (e.a, e.b):
            continue
        pa, pb = pred[e.a], pred[e.b]
        if pa != pb and frozenset((pa, pb)) not in pairs:
            raise GraphError(
                f"child edge {eid} joins {e.a}->{pa} and {e.b}->{pb}, "
                "which are neither equal nor adjacent in the parent"
            )


def fragment_preimage(
    parent: LabeledGraph,
    child: LabeledGraph,
    pred: Mapping[str, str],
    target: tuple[str, str],
    edge_parent: Mapping[str, str] | None = None,
) -> LabeledGraph:
    """Preimage under ``pred`` of a parent vertex's open star or of a parent edge.

    ``target`` is ``("vertex", vid)`` or ``("edge", eid)``.  ``edge_parent``
    optionally says which parent edge each crossing child edge came from; it
    only matters when the parent has parallel edges.
    """
    _check_morphism(parent, child, pred)
    kind, tid = target
    if kind == "vertex":
        if tid not in parent.vertices:
            raise GraphError(f"unknown parent vertex {tid!r}")
        return _vertex_fragment(child, pred, tid, _children_of(child, pred).get(tid, []))
    if kind == "edge":
        if tid not in parent.edges:
            raise GraphError(f"unknown parent edge {tid!r}")
        crossing = _crossing_edges(parent, child, pred, edge_parent)
        return _edge_fragment(child, crossing.get(tid, []))
    raise GraphError(f"target kind must be 'vertex' or 'edge', got {kind!r}")


def _children_of(child, pred):
    out = defaultdict(list)
    for v in child.vertices:
        out[pred[v]].append(v)
    return out


def _crossing_edges(parent, child, pred, edge_parent=None):
    """Map parent edge id -> child edges lying over it."""
    out = defaultdict(list)
    by_ends = defaultdict(list)
    for eid, e in parent.edges.items():
        by_ends[frozenset((e.a, e.b))].append(eid)
    for eid, e in child.edges.items():
        if FREE in (e.a, e.b):
            continue
        pa, pb = pred[e.a], pred[e.b]
        if pa == pb:
            continue
        if edge_parent is not None and eid in edge_parent:
            out[edge_parent[eid]].append(eid)
        else:
            for peid in by_ends.get(frozenset((pa, pb)), ()):
                out[peid].append(eid)
    return out


def _vertex_fragment(child, pred, u, kids):
    kidset = set(kids)
    verts = {c: child.vertices[c] for c in kids}
    edges = {}
    for c in kids:
        for eid in child.incident[c]:
            e = child.edges[eid]
            other = e.b if e.a == c else e.a
            if other in kidset:
                edges[eid] = e
            else:
                edges[eid] = Edge(e.symbol, c, FREE)
    return LabeledGraph(verts, edges)


def _edge_fragment(child, eids):
    return LabeledGraph({}, {eid: Edge(child.edges[eid].symbol, FREE, FREE) for eid in eids})


def preimage_fragments(parent, child, pred, edge_parent=None):
    """All vertex-star and edge preimages at once: ``(by_vertex, by_edge)``."""
    _check_morphism(parent, child, pred)
    kids = _children_of(child, pred)
    by_vertex = {u: _vertex_fragment(child, pred, u, kids.get(u, [])) for u in parent.vertices}
    crossing = _crossing_edges(parent, child, pred, edge_parent)
    by_edge = {eid: _edge_fragment(child, crossing.get(eid, [])) for eid in parent.edges}
    return by_vertex, by_edge


# -- incidence encoding shared by the search and the certificate -------------

def _encode(g: LabeledGraph):
    """Vertex/edge incidence graph: nodes are vertices then edges, in id order."""
    vids = list(g.vertices)
    eids = list(g.edges)
    index = {v: i for i, v in enumerate(vids)}
    n = len(vids)
    adj = [[] for _ in range(n + len(eids))]
    keys = [("v", g.vertices[v]) for v in vids]
    for k, eid in enumerate(eids):
        e = g.edges[eid]
        keys.append(("e", e.symbol))
        for end in (e.a, e.b):
            if end != FREE:
                adj[n + k].append(index[end])
                adj[index[end]].append(n + k)
    return vids, eids, keys, adj


def _canonical_permutation(g: LabeledGraph):
    vids, eids, keys, adj = _encode(g)
    legend = sorted(set(keys))
    colour = {k: i for i, k in enumerate(legend)}
    pairs = [(i, j) for i, row in enumerate(adj) for j in row if i < j]
    ig = igraph.Graph(n=len(keys), edges=pairs)
    order = ig.canonical_permutation(color=[colour[k] for k in keys])
    # igraph lists the original node at each canonical position; invert it
    perm = [0] * len(order)
    for pos, node in enumerate(order):
        perm[node] = pos
    return vids, eids, keys, pairs, legend, perm


def _connected_certificate(g: LabeledGraph) -> bytes:
    _, _, keys, pairs, legend, perm = _canonical_permutation(g)
    colours = [None] * len(keys)
    for i, k in enumerate(keys):
        colours[perm[i]] = legend.index(k)
    cedges = sorted(tuple(sorted((perm[i], perm[j]))) for i, j in pairs)
    doc = {"legend": legend, "colours": colours, "edges": cedges}
    return json.dumps(doc, separators=(",", ":")).encode()


def components(g: LabeledGraph) -> list[LabeledGraph]:
    """Connected pieces; a doubly-open edge is a piece of its own."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges.values():
        if FREE not in (e.a, e.b):
            ra, rb = find(e.a), find(e.b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    verts = defaultdict(dict)
    edges = defaultdict(dict)
    for v, s in g.vertices.items():
        verts[find(v)][v] = s
    loose = []
    for eid, e in g.edges.items():
        ends = [x for x in (e.a, e.b) if x != FREE]
        if ends:
            edges[find(ends[0])][eid] = e
        else:
            loose.append(LabeledGraph({}, {eid: e}))
    return [LabeledGraph(verts[r], edges[r]) for r in sorted(verts)] + loose


def _ranked_components(g):
    # bliss copes badly with many isomorphic components, so work piecewise
    parts = [(_connected_certificate(c), i, c) for i, c in enumerate(components(g))]
    parts.sort(key=lambda t: (t[0], t[1]))
    return parts


def canonical_labeling(g: LabeledGraph) -> tuple[dict[str, int], dict[str, int]]:
    """Canonical rank of every vertex and every edge.

    Ranks are positions in one joint vertex-and-edge order, so they are
    distinct but not contiguous.  Isomorphic graphs get ranks that agree up
    to an automorphism.
    """
    vrank, erank = {}, {}
    offset = 0
    for _, _, c in _ranked_components(g):
        vids, eids, _, _, _, perm = _canonical_permutation(c)
        n = len(vids)
        for i, v in enumerate(vids):
            vrank[v] = offset + perm[i]
        for k, e in enumerate(eids):
            erank[e] = offset + perm[n + k]
        offset += len(perm)
    return vrank, erank


def canonical_form(g: LabeledGraph) -> bytes:
    """Certificate equal for two graphs exactly when they are isomorphic."""
    if not g.vertices and not g.edges:
        return EMPTY_CERTIFICATE
    certs = [cert.decode() for cert, _, _ in _ranked_components(g)]
    return b"LG1:" + json.dumps(certs, separators=(",", ":")).encode()


# -- isomorphism search ------------------------------------------------------

def _refine(adj_g, col_g, adj_h, col_h):
    """Joint colour refinement; None when the two colourings diverge."""
    classes = -1
    while True:
        sig_g = [(col_g[i], tuple(sorted(col_g[j] for j in row))) for i, row in enumerate(adj_g)]
        sig_h = [(col_h[i], tuple(sorted(col_h[j] for j in row))) for i, row in enumerate(adj_h)]
        keys = sorted(set(sig_g) | set(sig_h))
        idx = {k: i for i, k in enumerate(keys)}
        new_g = [idx[s] for s in sig_g]
        new_h = [idx[s] for s in sig_h]
        if Counter(new_g) != Counter(new_h):
            return None
        if len(keys) == classes:
            return new_g, new_h
        classes = len(keys)
        col_g, col_h = new_g, new_h


def are_isomorphic(g: LabeledGraph, h: LabeledGraph) -> LabeledIsomorphism | None:
    """Label-preserving isomorphism ``g -> h`` or None.

    The witness is the lexicographically least one: vertices of ``g`` are
    assigned in sorted id order, each to the smallest workable id of ``h``.
    Parallel edges are then paired in sorted id order.
    """
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    gv, ge, gkeys, gadj = _encode(g)
    hv, he, hkeys, hadj = _encode(h)
    if Counter(gkeys) != Counter(hkeys):
        return None
    legend = {k: i for i, k in enumerate(sorted(set(gkeys)))}
    start = _refine(gadj, [legend[k] for k in gkeys], hadj, [legend[k] for k in hkeys])
    if start is None:
        return None
    nv = len(gv)

    def leaf(vmap):
        emap = {}
        gb, hb = defaultdict(list), defaultdict(list)
        for eid, e in g.edges.items():
            ends = tuple(sorted(FREE if x == FREE else vmap[x] for x in (e.a, e.b)))
            gb[(e.symbol, ends)].append(eid)
        for eid, e in h.edges.items():
            hb[(e.symbol, tuple(sorted((e.a, e.b))))].append(eid)
        if {k: len(v) for k, v in gb.items()} != {k: len(v) for k, v in hb.items()}:
            return None
        for k, ids in gb.items():
            emap.update(zip(ids, hb[k]))
        return LabeledIsomorphism(dict(vmap), dict(sorted(emap.items())))

    def search(col_g, col_h, k, vmap):
        cells = defaultdict(list)
        for i in range(nv):
            cells[col_h[i]].append(i)
        gsize = Counter(col_g[:nv])
        while k < nv:
            c = col_g[k]
            if gsize[c] == 1:
                vmap[gv[k]] = hv[cells[c][0]]
                k += 1
                continue
            fresh = max(max(col_g), max(col_h)) + 1
            for u in cells[c]:
                ng = list(col_g)
                nh = list(col_h)
                ng[k] = fresh
                nh[u] = fresh
                refined = _refine(gadj, ng, hadj, nh)
                if refined is None:
                    continue
                found = search(refined[0], refined[1], k + 1, dict(vmap, **{gv[k]: hv[u]}))
                if found is not None:
                    return found
            return None
        return leaf(vmap)

    return search(start[0], start[1], 0, {})
