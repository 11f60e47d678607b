"""Compare redundant links (direct search and via index codes) with independent components."""

import argparse
import time

from ncic.equiv import nc_to_ic_instance
from ncic.icsie import is_independent_component
from ncic.ncle import is_redundant_link, network_code_exists
from ncic.sweeps import network_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-edges", type=int, default=4)
    args = ap.parse_args()
    t0 = time.perf_counter()
    nets = list(network_suite(max_edges=args.max_edges))
    feasible = [n for n in nets if network_code_exists(n)]
    links = redundant = bad = 0
    for net in feasible:
        ic, rep = nc_to_ic_instance(net, allow_empty_inputs=True)
        for e in net.edge_ids:
            indep = is_independent_component(ic, e, rep.partition, len(net.edges))
            direct = is_redundant_link(net, e, "direct")
            via_ic = is_redundant_link(net, e, "icsie")
            links += 1
            redundant += direct
            if not (direct == via_ic == indep):
                bad += 1
                print(f"mismatch on {e}: direct={direct} icsie={via_ic} independent={indep}\n  {net}")
    print(f"{len(nets)} networks, {len(feasible)} feasible, {links} links, {redundant} redundant")
    print(f"{bad} mismatches, {time.perf_counter() - t0:.1f}s")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
