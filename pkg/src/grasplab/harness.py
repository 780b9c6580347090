"""Experiment driver: graph -> reorder -> trace -> LLC simulation -> CSV rows."""
from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .cachesim import (CacheConfig, Policy, PolicyKind, RegionMap, llc_stream,
                       miss_elimination_over, run_simulation, simulate_llc)
from .graph import (Direction, EdgeList, RmatParams, build_csr, degree_skew_report,
                    generate_rmat, load_edge_list)
from .reorder import ReorderAlgo, apply_permutation, reorder
from .trace import (ArrayDescriptor, ArrayKind, MemoryLayout, breakdown_by_kind, build_layout,
                    dump_trace, load_trace, trace_pagerank_pull, trace_sssp_push)

log = logging.getLogger(__name__)

LRU = Policy(PolicyKind.LRU)
DRRIP = Policy(PolicyKind.DRRIP)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GraphSource:
    path: Path | None = None
    rmat: RmatParams | None = None

    def __post_init__(self):
        if (self.path is None) == (self.rmat is None):
            raise ConfigError("exactly one of path / rmat parameters must be given")

    @property
    def label(self) -> str:
        if self.path is not None:
            return Path(self.path).stem
        p = self.rmat
        kind = "uniform" if p.a == p.b == p.c == p.d else "rmat"
        return f"{kind}{p.scale}-{p.avg_degree}"

    def load(self, seed: int | None = None) -> EdgeList:
        if self.path is not None:
            return load_edge_list(self.path)
        params = self.rmat if seed is None else dataclasses.replace(self.rmat, seed=seed)
        return generate_rmat(params)


@dataclass(frozen=True)
class ExperimentConfig:
    graph: GraphSource
    kernel: str = "pagerank"
    rounds: int = 1
    reorder: ReorderAlgo = ReorderAlgo()
    policies: tuple[Policy, ...] = (LRU, DRRIP, Policy(PolicyKind.GRASP))
    cache: CacheConfig = CacheConfig()
    llc_sizes: tuple[int, ...] | None = None
    n_property_arrays: int = 1
    seed: int | None = None

    def __post_init__(self):
        if not self.policies:
            raise ConfigError("at least one policy is required")
        if self.kernel not in ("pagerank", "sssp"):
            raise ConfigError(f"unknown kernel {self.kernel!r}")
        if self.rounds < 1:
            raise ConfigError("rounds must be >= 1")
        if self.n_property_arrays not in (1, 2):
            raise ConfigError("n_property_arrays must be 1 or 2")
        for size in self.llc_sizes or ():
            try:
                self.cache.with_llc_bytes(size)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.llc_sizes or (self.cache.llc_bytes,)


@dataclass(frozen=True)
class ResultRow:
    graph: str
    kernel: str
    reorder: str
    policy: str
    llc_bytes: int
    llc_accesses: int
    llc_misses: int
    miss_elim_over_lru: float
    property_access_fraction: float
    hint_miss_breakdown: str
    miss_elim_over_drrip: float = 0.0

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]

    @classmethod
    def from_strings(cls, d: dict[str, str]) -> "ResultRow":
        kw = {}
        for f in dataclasses.fields(cls):
            raw = d[f.name]
            kw[f.name] = {"int": int, "float": float}.get(f.type, str)(raw)
        return cls(**kw)

    def to_strings(self) -> list[str]:
        out = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            out.append(f"{v:.4f}" if isinstance(v, float) else str(v))
        return out


@dataclass
class Workload:
    """A traced kernel and its L1-filtered LLC stream, reusable across LLC sizes."""

    label: str
    kernel: str
    reorder: str
    layout: MemoryLayout
    trace: object
    streams: dict = field(default_factory=dict)

    def stream(self, cache: CacheConfig):
        key = (cache.block_size, cache.l1_enabled, cache.l1_sets, cache.l1_ways)
        if key not in self.streams:
            self.streams[key] = llc_stream(self.trace, cache)
        return self.streams[key]


def build_workload(cfg: ExperimentConfig, edges: EdgeList | None = None) -> Workload:
    if edges is None:
        edges = cfg.graph.load(cfg.seed)
    if edges.vertex_count == 0:
        raise ConfigError("graph has no vertices")
    # reuse of Property[v] tracks out-degree under pull and in-degree under push
    rank_dir = Direction.OUT_EDGES if cfg.kernel == "pagerank" else Direction.IN_EDGES
    perm = reorder(build_csr(edges, rank_dir), cfg.reorder)
    edges = apply_permutation(edges, perm)
    layout = build_layout(edges.vertex_count, edges.edge_count, cfg.n_property_arrays)
    if cfg.kernel == "pagerank":
        trace = trace_pagerank_pull(build_csr(edges, Direction.IN_EDGES), layout)
    else:
        trace = trace_sssp_push(build_csr(edges, Direction.OUT_EDGES), layout, cfg.rounds)
    log.info("%s %s: %d accesses", cfg.graph.label, cfg.kernel, len(trace))
    return Workload(cfg.graph.label, cfg.kernel, str(cfg.reorder), layout, trace)


def _hint_breakdown(stats) -> str:
    return ";".join(f"{h}:{mis}" for h, (_, mis) in stats.per_hint.items())


def simulate_workload(w: Workload, policies, cache: CacheConfig, sizes) -> list[ResultRow]:
    stream = w.stream(cache)
    bd = breakdown_by_kind(stream.tags, w.layout)
    rows = []
    for size in sizes:
        cfg = cache.with_llc_bytes(size)
        regions = RegionMap.from_layout(w.layout, cfg.llc_bytes)
        results = {}
        for pol in dict.fromkeys((LRU, DRRIP) + tuple(policies)):
            results[pol] = simulate_llc(stream, cfg, pol, regions if pol.uses_hints else None)
            log.info("%s %dKB %s: %d misses", w.label, size // 1024, pol,
                     results[pol].llc_misses)
        for pol in policies:
            st = results[pol]
            rows.append(ResultRow(
                graph=w.label, kernel=w.kernel, reorder=w.reorder, policy=str(pol),
                llc_bytes=cfg.llc_bytes, llc_accesses=st.llc_accesses,
                llc_misses=st.llc_misses,
                miss_elim_over_lru=miss_elimination_over(results[LRU], st),
                property_access_fraction=100.0 * bd.property_fraction,
                hint_miss_breakdown=_hint_breakdown(st),
                miss_elim_over_drrip=miss_elimination_over(results[DRRIP], st),
            ))
    return rows


def run_experiment(cfg: ExperimentConfig, edges: EdgeList | None = None) -> list[ResultRow]:
    """One row per (policy, LLC size). LRU and DRRIP are always simulated as baselines."""
    w = build_workload(cfg, edges)
    return simulate_workload(w, cfg.policies, cfg.cache, cfg.sizes)


def emit_csv(rows, path) -> None:
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to write")
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(ResultRow.columns())
        for r in rows:
            wr.writerow(r.to_strings())


def read_csv(path) -> list[ResultRow]:
    with open(path, newline="") as fh:
        return [ResultRow.from_strings(d) for d in csv.DictReader(fh)]


def report_skew(source: GraphSource, seed: int | None = None, out=None) -> str:
    edges = source.load(seed)
    rep = degree_skew_report(build_csr(edges, Direction.IN_EDGES),
                             build_csr(edges, Direction.OUT_EDGES))
    text = f"{source.label}\n{rep.format_table()}"
    print(text, file=out or sys.stdout)
    return text


# --- command line -----------------------------------------------------------

def _ints(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x]


def _rmat_arg(s: str) -> RmatParams:
    parts = s.split(",")
    if len(parts) not in (2, 6):
        raise argparse.ArgumentTypeError("expected scale,deg or scale,deg,a,b,c,d")
    scale, deg = int(parts[0]), int(parts[1])
    if len(parts) == 2:
        return RmatParams(scale, deg)
    return RmatParams(scale, deg, *map(float, parts[2:]))


def _uniform_arg(s: str) -> RmatParams:
    scale, deg = _ints(s)
    return RmatParams.uniform(scale, deg)


def _add_graph_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--graph", type=Path, help="edge-list file")
    g.add_argument("--rmat", type=_rmat_arg, metavar="SCALE,DEG[,A,B,C,D]")
    g.add_argument("--uniform", type=_uniform_arg, metavar="SCALE,DEG")
    p.add_argument("--seed", type=int, default=1)


def _graph_source(args) -> GraphSource:
    if args.graph is not None:
        return GraphSource(path=args.graph)
    return GraphSource(rmat=args.uniform or args.rmat or RmatParams(20, 16))


def _cache_args(p: argparse.ArgumentParser):
    p.add_argument("--llc-kb", type=_ints, default=[1024], metavar="N[,N...]")
    p.add_argument("--ways", type=int, default=16)
    p.add_argument("--block", type=int, default=64)
    p.add_argument("--l1", choices=("on", "off"), default="on")


def _cache_config(args) -> CacheConfig:
    return CacheConfig.from_llc_bytes(args.llc_kb[0] * 1024, args.ways, args.block,
                                      l1_enabled=args.l1 == "on")


def _policies(s: str) -> tuple[Policy, ...]:
    return tuple(Policy.parse(x) for x in s.split(",") if x)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grasplab", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    run = sub.add_parser("run", help="trace a kernel and simulate LLC policies")
    _add_graph_args(run)
    run.add_argument("--kernel", choices=("pagerank", "sssp"), default="pagerank")
    run.add_argument("--rounds", type=int, default=1)
    run.add_argument("--reorder", choices=("none", "sort", "hubsort", "dbg"), default="dbg")
    run.add_argument("--dbg-groups", type=int, default=8)
    run.add_argument("--policy", type=_policies,
                     default=_policies("lru,drrip,grasp,ship,pin100,opt"))
    _cache_args(run)
    run.add_argument("--prop-arrays", type=int, choices=(1, 2), default=1)
    run.add_argument("--out", type=Path, help="CSV output (default: stdout)")
    run.add_argument("--dump-trace", type=Path, help="write the raw access trace here")

    skew = sub.add_parser("skew", help="print degree-skew statistics")
    _add_graph_args(skew)

    sim = sub.add_parser("simulate", help="replay a dumped trace")
    sim.add_argument("trace", type=Path)
    sim.add_argument("--policy", type=_policies, default=_policies("lru,drrip,opt"))
    _cache_args(sim)
    sim.add_argument("--abr", action="append", default=[], metavar="START:END",
                     help="property array bounds (hex ok); repeat per array")
    sim.add_argument("--out", type=Path, help="CSV output (default: stdout)")
    return ap


def _parse_abr(s: str) -> ArrayDescriptor:
    lo, hi = (int(x, 0) for x in s.split(":"))
    return ArrayDescriptor(f"property@{lo:#x}", ArrayKind.PROPERTY, lo, 1, hi - lo)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(message)s")
    try:
        if args.cmd == "skew":
            report_skew(_graph_source(args), args.seed)
            return 0
        cache = _cache_config(args)
        sizes = tuple(kb * 1024 for kb in args.llc_kb)
        if args.cmd == "run":
            cfg = ExperimentConfig(
                graph=_graph_source(args), kernel=args.kernel, rounds=args.rounds,
                reorder=ReorderAlgo.parse(args.reorder, args.dbg_groups),
                policies=args.policy, cache=cache, llc_sizes=sizes,
                n_property_arrays=args.prop_arrays, seed=args.seed)
            w = build_workload(cfg)
            if args.dump_trace:
                dump_trace(w.trace, args.dump_trace)
            rows = simulate_workload(w, cfg.policies, cfg.cache, cfg.sizes)
        else:
            layout = MemoryLayout(tuple(_parse_abr(s) for s in args.abr)) if args.abr else None
            trace = load_trace(args.trace)
            rows = []
            for size in sizes:
                c = cache.with_llc_bytes(size)
                regions = RegionMap.from_layout(layout, size) if layout else None
                base = run_simulation(trace, c, LRU)
                for pol in args.policy:
                    st = run_simulation(trace, c, pol, regions if pol.uses_hints else None)
                    rows.append(ResultRow(args.trace.stem, "trace", "-", str(pol), size,
                                          st.llc_accesses, st.llc_misses,
                                          miss_elimination_over(base, st), 0.0,
                                          _hint_breakdown(st)))
    except (ConfigError, ValueError, OSError) as exc:
        print(f"grasplab: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        emit_csv(rows, args.out)
    else:
        wr = csv.writer(sys.stdout, lineterminator="\n")
        wr.writerow(ResultRow.columns())
        wr.writerows(r.to_strings() for r in rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
