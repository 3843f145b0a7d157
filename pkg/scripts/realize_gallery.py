#!/usr/bin/env python3
"""Run the 3D realization check over bundled and random rules, with timings."""
from __future__ import annotations

import argparse
import logging
import time

from subdivrules import RULES, build_pair, random_rule, verify_realization
from subdivrules.realize import BALL, INTERIOR_DISK, SUB_DISK


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--random", type=int, default=25, help="number of random rules (seeds 1..N)")
    args = ap.parse_args()
    logging.basicConfig(level=logging.ERROR)

    cases = [(n, f()) for n, f in RULES.items()] + [(f"random {s}", random_rule(s)) for s in range(1, args.random + 1)]
    failures = 0
    for name, rule in cases:
        t = time.perf_counter()
        rep = verify_realization(rule, args.depth)
        pair = build_pair(rule)
        cells = pair.subdivided
        print(f"{name:<12} {'PASS' if rep.passed else 'FAIL'}  "
              f"balls={len(cells.of_kind(BALL))} interior={len(cells.of_kind(INTERIOR_DISK))} "
              f"subdisks={len(cells.of_kind(SUB_DISK))}  {time.perf_counter() - t:.2f}s")
        if not rep.passed:
            failures += 1
            print("   ", rep.first_failure)
    print(f"{len(cases) - failures}/{len(cases)} passed")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
