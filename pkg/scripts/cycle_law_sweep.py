"""Check that acyclic instances are exactly those whose optimal length is n."""

import argparse
import time

from ncic.icsie import find_delta_s_cycle, optimal_codelength
from ncic.sweeps import index_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--max-m", type=int, default=3)
    ap.add_argument("--q", type=int, default=2)
    args = ap.parse_args()
    t0 = time.perf_counter()
    total = bad = cyclic = 0
    for inst in index_suite(args.max_n, args.max_m, args.q):
        acyclic = find_delta_s_cycle(inst) is None
        cyclic += not acyclic
        for mode in ("linear", "nonlinear"):
            if acyclic != (optimal_codelength(inst, mode).length == inst.n):
                bad += 1
                print(f"violation ({mode}): {inst}")
        total += 1
    print(f"{total} instances, {cyclic} with a cycle, {bad} violations, {time.perf_counter() - t0:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
