"""GRASP and DRRIP miss elimination over LRU as the LLC grows.

Prints the hot Property footprint so the sweep can be placed relative to it.

    python3 scripts/size_sweep.py --scale 20 --llc-kb 128,256,512,1024,2048,4096
"""
import argparse
import sys

from grasplab.cachesim import CacheConfig, DRRIP, GRASP
from grasplab.graph import Direction, RmatParams, build_csr, generate_rmat, hot_mask
from grasplab.harness import ExperimentConfig, GraphSource, build_workload, simulate_workload
from grasplab.reorder import ReorderAlgo


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=int, default=18)
    ap.add_argument("--degree", type=int, default=16)
    ap.add_argument("--llc-kb", default="128,256,512,1024,2048,4096")
    ap.add_argument("--seed", type=int, default=1)
    a = ap.parse_args()

    params = RmatParams(a.scale, a.degree, seed=a.seed)
    edges = generate_rmat(params)
    g_out = build_csr(edges, Direction.OUT_EDGES)
    hot = int(hot_mask(g_out.degrees(), g_out.edge_count).sum())
    print(f"hot vertices (out): {hot}, hot Property footprint {hot * 8 >> 10} KB")

    cfg = ExperimentConfig(graph=GraphSource(rmat=params), reorder=ReorderAlgo.parse("dbg"),
                           policies=(DRRIP, GRASP), cache=CacheConfig())
    w = build_workload(cfg, edges)
    sizes = [int(k) << 10 for k in a.llc_kb.split(",")]
    print(f"{'LLC':>7} {'DRRIP %':>8} {'GRASP %':>8}")
    for size in sizes:
        cache = CacheConfig().with_llc_bytes(size)
        rows = {r.policy: r for r in simulate_workload(w, cfg.policies, cache, [size])}
        print(f"{size >> 10:>5}KB {rows['drrip'].miss_elim_over_lru:>8.2f} "
              f"{rows['grasp'].miss_elim_over_lru:>8.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
