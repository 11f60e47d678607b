"""Compare error-resistant optima with optima after admissible side-information deletion."""

import argparse
import time
from collections import Counter

from ncic.icsie import admissible_deletions, delete_side_info_edges, optimal_codelength
from ncic.sweeps import index_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--max-m", type=int, default=3)
    ap.add_argument("--mode", choices=("linear", "nonlinear"), default="nonlinear")
    args = ap.parse_args()
    t0 = time.perf_counter()
    gaps: Counter = Counter()
    bad = 0
    for inst in index_suite(args.max_n, args.max_m):
        if all(r.delta == 0 for r in inst.receivers):
            continue
        top = optimal_codelength(inst, args.mode).length
        for dels in admissible_deletions(inst):
            low = optimal_codelength(delete_side_info_edges(inst, dels), args.mode).length
            gaps[top - low] += 1
            if low > top:
                bad += 1
                print(f"violation: {inst} deleting {dels}")
    print("gap histogram (optimum minus deleted optimum):")
    for g in sorted(gaps):
        print(f"  {g}: {gaps[g]}")
    print(f"{sum(gaps.values())} deletion sets, {bad} violations, {time.perf_counter() - t0:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
