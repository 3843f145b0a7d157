#!/usr/bin/env python3
"""Level sizes and growth ratios for every bundled rule and planar example."""
from __future__ import annotations

import argparse
import logging

from subdivrules import RULES, build_history, stats
from subdivrules.planar import RULES2D, SURFACES, history_graph_2d

PLANAR = [("TETRA", "BARY"), ("TOR9", "QUAD"), ("TETRA", "SIER"), ("TRI1", "BARY")]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=5)
    args = ap.parse_args()
    logging.basicConfig(level=logging.ERROR)

    rows = [(name, build_history(f(), args.depth)) for name, f in RULES.items()]
    rows += [(f"{s}+{r}", history_graph_2d(SURFACES[s](), RULES2D[r](), args.depth)) for s, r in PLANAR]
    width = max(len(n) for n, _ in rows)
    print(f"{'example':<{width}}  sizes / ratios")
    for name, h in rows:
        rep = stats(h)
        print(f"{name:<{width}}  {rep.vertices}")
        print(f"{'':<{width}}  {[str(r) for r in rep.ratios]}")


if __name__ == "__main__":
    main()
