"""Policy comparison on one workload: LLC misses and elimination over LRU/DRRIP.

    python3 scripts/compare_policies.py --scale 20 --llc-kb 256,512,1024 --out policies.csv
"""
import argparse
import sys

from grasplab.cachesim import CacheConfig, Policy
from grasplab.graph import RmatParams
from grasplab.harness import ExperimentConfig, GraphSource, emit_csv, run_experiment
from grasplab.reorder import ReorderAlgo


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=int, default=18)
    ap.add_argument("--degree", type=int, default=16)
    ap.add_argument("--uniform", action="store_true", help="a=b=c=d (no skew)")
    ap.add_argument("--kernel", default="pagerank", choices=("pagerank", "sssp"))
    ap.add_argument("--reorder", default="dbg")
    ap.add_argument("--policies", default="lru,drrip,grasp,ship,pin25,pin50,pin75,pin100,opt")
    ap.add_argument("--llc-kb", default="256,512,1024")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default=None)
    a = ap.parse_args()

    make = RmatParams.uniform if a.uniform else RmatParams
    params = make(a.scale, a.degree, seed=a.seed)
    cfg = ExperimentConfig(
        graph=GraphSource(rmat=params), kernel=a.kernel, rounds=1,
        reorder=ReorderAlgo.parse(a.reorder),
        policies=tuple(Policy.parse(p) for p in a.policies.split(",")),
        cache=CacheConfig(), llc_sizes=tuple(int(k) << 10 for k in a.llc_kb.split(",")))
    rows = run_experiment(cfg)
    if a.out:
        emit_csv(rows, a.out)
    print(f"{'LLC':>7} {'policy':>13} {'misses':>11} {'vs LRU %':>9} {'vs DRRIP %':>10}")
    for r in rows:
        print(f"{r.llc_bytes >> 10:>5}KB {r.policy:>13} {r.llc_misses:>11} "
              f"{r.miss_elim_over_lru:>9.2f} {r.miss_elim_over_drrip:>10.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
