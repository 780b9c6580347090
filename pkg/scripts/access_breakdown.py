"""Share of accesses per data structure, before and after the L1 filter.

    python3 scripts/access_breakdown.py --scale 18 --kernel sssp
"""
import argparse
import sys

from grasplab.cachesim import CacheConfig, llc_stream
from grasplab.graph import RmatParams
from grasplab.harness import ExperimentConfig, GraphSource, build_workload
from grasplab.reorder import ReorderAlgo
from grasplab.trace import breakdown_by_kind, trace_breakdown


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scale", type=int, default=18)
    ap.add_argument("--degree", type=int, default=16)
    ap.add_argument("--kernel", default="pagerank", choices=("pagerank", "sssp"))
    ap.add_argument("--reorder", default="dbg")
    ap.add_argument("--seed", type=int, default=1)
    a = ap.parse_args()

    cfg = ExperimentConfig(graph=GraphSource(rmat=RmatParams(a.scale, a.degree, seed=a.seed)),
                           kernel=a.kernel, reorder=ReorderAlgo.parse(a.reorder))
    w = build_workload(cfg)
    before = trace_breakdown(w.trace)
    stream = llc_stream(w.trace, CacheConfig())
    after = breakdown_by_kind(stream.tags, w.layout)
    print(f"{'array':>10} {'all %':>7} {'LLC %':>7}")
    for kind, frac in before.fractions().items():
        print(f"{kind:>10} {100 * frac:>7.2f} {100 * after.fraction(kind):>7.2f}")
    print(f"accesses {before.total}, reaching the LLC {after.total}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
