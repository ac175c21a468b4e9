#!/usr/bin/env python3
"""Ablation: what the backward step buys at 27-30 vertices.

Runs the width-1000 campaign twice, with and without the backward pass, and
prints the best edge counts side by side.  The dense graphs at 27, 29 and 30
vertices have sub-optimal ancestors, so the forward-only run is expected to
fall short there.
"""

import argparse
import time

from udgsearch.search import SearchConfig, run_search

PUBLISHED = {27: 81, 28: 85, 29: 89, 30: 93}


def run(enable_backward, args):
    config = SearchConfig(
        beam_width=args.beam_width,
        max_vertices=30,
        num_runs=args.runs,
        seed=args.seed,
        enable_backward=enable_backward,
    )
    t0 = time.time()
    state = run_search(config)
    return state, time.time() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--beam-width", type=int, default=1000)
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    with_b, t_with = run(True, args)
    without_b, t_without = run(False, args)
    print(f"{'V':>3} {'published':>10} {'backward':>9} {'forward-only':>13}")
    for v in range(16, 31):
        star = " *" if v in PUBLISHED else ""
        print(f"{v:>3} {PUBLISHED.get(v, '-')!s:>10} "
              f"{with_b.best.get(v):>9} {without_b.best.get(v):>13}{star}")
    print(f"\nbackward: {t_with:.0f}s   forward-only: {t_without:.0f}s")


if __name__ == "__main__":
    main()
