#!/usr/bin/env python3
"""Axiom reports for planar history graphs, before and after label refinement."""
from __future__ import annotations

import argparse

from subdivrules import check_axioms, infer_rule, refine_labels
from subdivrules.axioms import InferenceError
from subdivrules.planar import RULES2D, SURFACES, history_graph_2d

PLANAR = [("TETRA", "BARY"), ("TOR9", "QUAD"), ("TETRA", "SIER"), ("TRI1", "BARY")]


def classes(h):
    return len({s for g in h.levels[1:] for s in g.vertices.values()})


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=4)
    args = ap.parse_args()
    for s, r in PLANAR:
        h = history_graph_2d(SURFACES[s](), RULES2D[r](), args.depth)
        raw = check_axioms(h)
        ref = refine_labels(h)
        fixed = check_axioms(ref)
        print(f"{s}+{r}: raw {'pass' if raw.ok else 'fail ' + str(raw.failed())}, "
              f"refined {'pass' if fixed.ok else 'fail ' + str(fixed.failed())} "
              f"with {classes(ref)} vertex labels")
        for n in raw.failed():
            print(f"   condition {n}: {raw.condition(n).detail}")
        try:
            rule = infer_rule(ref if not raw.ok else h)
            print(f"   inferred signatures: {dict(rule.signatures)}")
        except (InferenceError, ValueError) as exc:
            print(f"   no rule: {exc}")


if __name__ == "__main__":
    main()
