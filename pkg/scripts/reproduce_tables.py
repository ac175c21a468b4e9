#!/usr/bin/env python3
"""Reproduce the published dense-UDG edge counts and compare.

Runs the two standard campaigns (V<=15 at width 100, V<=30 at width 1000)
into fresh directories and diffs the resulting best tables against the
published values.  Expect a few seconds for the first and ~8 minutes for the
second on a small machine.
"""

import argparse
import sys
import tempfile
import time
from pathlib import Path

from udgsearch.search import SearchConfig, run_search
from udgsearch.store import GraphStore

PUBLISHED = {
    1: 0, 2: 1, 3: 3, 4: 5, 5: 7, 6: 9, 7: 12, 8: 14, 9: 18, 10: 20,
    11: 23, 12: 27, 13: 30, 14: 33, 15: 37, 16: 41, 17: 43, 18: 46,
    19: 50, 20: 54, 21: 57, 22: 60, 23: 64, 24: 68, 25: 72, 26: 76,
    27: 81, 28: 85, 29: 89, 30: 93,
}


def campaign(label, config, out_dir):
    print(f"== {label}: width {config.beam_width}, {config.num_runs} runs, "
          f"to {config.max_vertices} vertices -> {out_dir}")
    t0 = time.time()
    state = run_search(config, store=GraphStore(out_dir))
    elapsed = time.time() - t0
    ok = True
    for v in range(1, config.max_vertices + 1):
        got = state.best.get(v)
        want = PUBLISHED.get(v)
        mark = "ok" if got == want else "MISMATCH"
        if got != want:
            ok = False
        print(f"  V={v:3d}  E={got:4d}  published={want:4d}  {mark}")
    print(f"  {'all match' if ok else 'MISMATCHES PRESENT'} in {elapsed:.1f}s")
    return ok


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=None,
                    help="base output directory (default: a temp dir)")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--skip-30", action="store_true",
                    help="only run the fast V<=15 campaign")
    args = ap.parse_args()

    base = Path(args.out) if args.out else Path(tempfile.mkdtemp(prefix="udg_"))
    base.mkdir(parents=True, exist_ok=True)

    ok = campaign(
        "known optima V<=15",
        SearchConfig(beam_width=100, max_vertices=15, num_runs=3, seed=args.seed),
        base / "out15",
    )
    if not args.skip_30:
        ok &= campaign(
            "published densest V<=30",
            SearchConfig(beam_width=1000, max_vertices=30, num_runs=10,
                         seed=args.seed),
            base / "out30",
        )
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
