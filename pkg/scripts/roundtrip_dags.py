"""Round-trip random networks through index coding and back, and their codes when feasible."""

import argparse
import time

from ncic.equiv import (
    compare_network_codes,
    ic_code_to_nc_code,
    ic_to_nc_instance,
    nc_code_to_ic_code,
    nc_to_ic_instance,
    structurally_equal,
)
from ncic.ncle import find_network_code
from ncic.sweeps import random_dags


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--max-edges", type=int, default=6)
    ap.add_argument("--seed", type=int, default=20240601)
    args = ap.parse_args()
    t0 = time.perf_counter()
    bad_inst = bad_code = coded = 0
    for net in random_dags(args.count, args.max_edges, args.seed):
        ic, rep = nc_to_ic_instance(net)
        back, _ = ic_to_nc_instance(ic, rep.partition)
        if not structurally_equal(back, net):
            bad_inst += 1
            print(f"instance mismatch: {net}")
        code = find_network_code(net)
        if code is None:
            continue
        coded += 1
        again = ic_code_to_nc_code(net, nc_code_to_ic_code(net, code), sigma=(0,) * len(net.edges))
        if not compare_network_codes(net, code, again).same:
            bad_code += 1
            print(f"code mismatch: {net}")
    print(f"{args.count} networks ({coded} with a code): {bad_inst} instance and {bad_code} code mismatches")
    print(f"{time.perf_counter() - t0:.1f}s")
    return 1 if bad_inst or bad_code else 0


if __name__ == "__main__":
    raise SystemExit(main())
