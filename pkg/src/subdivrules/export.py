"""DOT export and growth statistics for history graphs."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .rules import HistoryGraph


def _key(s):
    return (len(s), s)


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(h: HistoryGraph, name: str = "history", vertical: bool = True) -> str:
    """Graphviz text; nodes are ``L{level}_{id}``, vertical edges dashed.

    Everything is emitted in sorted order so equal inputs give equal bytes.
    """
    level_of = h.level_of
    out = [f"graph {_q(name)} {{", "  node [shape=circle];"]
    for n, g in enumerate(h.levels):
        for v in sorted(g.vertices, key=_key):
            out.append(f"  {_q(f'L{n}_{v}')} [label={_q(g.vertices[v])}];")
    for n, g in enumerate(h.levels):
        for eid in sorted(g.edges, key=_key):
            e = g.edges[eid]
            out.append(f"  {_q(f'L{n}_{e.a}')} -- {_q(f'L{n}_{e.b}')} [label={_q(e.symbol)}];")
    if vertical:
        for c, p in sorted(h.vertical, key=lambda cp: (_key(cp[0]), _key(cp[1]))):
            lc, lp = level_of.get(c), level_of.get(p)
            if lc is None or lp is None:
                continue
            out.append(f"  {_q(f'L{lc}_{c}')} -- {_q(f'L{lp}_{p}')} [style=dashed];")
    out.append("}")
    return "\n".join(out) + "\n"


@dataclass
class StatsReport:
    vertices: list[int]
    edges: list[int]
    degrees: list[dict[int, int]]     # per level: degree -> vertex count
    ratios: list[Optional[Fraction]]  # |level n+1| / |level n|, None after an empty level

    def lines(self) -> list[str]:
        out = ["level vertices edges degrees ratio"]
        for n, (v, e, d) in enumerate(zip(self.vertices, self.edges, self.degrees)):
            hist = ",".join(f"{k}:{c}" for k, c in sorted(d.items()))
            r = self.ratios[n - 1] if n else None
            ratio = "-" if r is None else str(r)
            out.append(f"{n} {v} {e} {hist or '-'} {ratio}")
        return out


def stats(h: HistoryGraph) -> StatsReport:
    verts = [len(g.vertices) for g in h.levels]
    edges = [len(g.edges) for g in h.levels]
    degrees = [dict(sorted(Counter(g.degree(v) for v in g.vertices).items())) for g in h.levels]
    ratios = [Fraction(b, a) if a else None for a, b in zip(verts, verts[1:])]
    return StatsReport(verts, edges, degrees, ratios)
