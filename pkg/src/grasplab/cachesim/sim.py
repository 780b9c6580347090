"""Trace replay through an optional L1 and a policy-managed LLC."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import engine
from .config import CacheConfig, Policy, PolicyKind
from .regions import ReuseHint, RegionMap, classify_many

NEVER = engine.NEVER


def precompute_next_use(blocks: np.ndarray) -> np.ndarray:
    """``next_use[i]`` = smallest j > i with ``blocks[j] == blocks[i]``, else NEVER."""
    blocks = np.asarray(blocks)
    n = len(blocks)
    next_use = np.full(n, NEVER, dtype=np.int64)
    if n < 2:
        return next_use
    order = np.argsort(blocks, kind="stable")
    same = blocks[order[1:]] == blocks[order[:-1]]
    next_use[order[:-1][same]] = order[1:][same]
    return next_use


class LlcCache:
    """Mutable LLC state for one policy; ``access`` steps a single reference."""

    def __init__(self, config: CacheConfig, policy: Policy, region_count: int = 1 << 16):
        s, w = config.llc_sets, config.llc_ways
        self.config = config
        self.policy = policy
        self.tags = np.full((s, w), -1, dtype=np.int64)
        self.rrpv = np.zeros((s, w), dtype=np.int8)
        self.stamp = np.zeros((s, w), dtype=np.int64)
        self.pinned = np.zeros((s, w), dtype=np.bool_)
        self.sig = np.zeros((s, w), dtype=np.int64)
        self.reused = np.zeros((s, w), dtype=np.bool_)
        self.nxt = np.zeros((s, w), dtype=np.int64)
        self.leader = engine.leader_sets(s)
        self.shct = np.full(region_count, engine.SHCT_INIT, dtype=np.int8)
        self.ctr = np.zeros(engine.N_COUNTERS, dtype=np.int64)
        self.ctr[engine.C_PSEL] = engine.PSEL_INIT
        self.pin_budget = policy.pin_budget(config)

    def _ensure_regions(self, max_block: int):
        need = ((max_block << self.config.block_bits) >> engine.SHIP_REGION_BITS) + 1
        if need > len(self.shct):
            grown = np.full(max(need, 2 * len(self.shct)), engine.SHCT_INIT, dtype=np.int8)
            grown[:len(self.shct)] = self.shct
            self.shct = grown

    def _args(self):
        p = self.policy
        return (self.tags, self.rrpv, self.stamp, self.pinned, self.sig, self.reused,
                self.nxt, self.leader, self.shct, self.ctr, p.kind.value,
                self.config.llc_ways, self.pin_budget, self.config.block_bits,
                p.opt_bypass)

    def access(self, block: int, hint: ReuseHint = ReuseHint.DEFAULT,
               next_use: int | None = None) -> int:
        """Returns engine.HIT, engine.MISS or engine.BYPASS (a miss that was not cached)."""
        if self.policy.kind is PolicyKind.OPT and next_use is None:
            raise ValueError("OPT needs the next-use position of every access")
        self._ensure_regions(block)
        return int(engine.llc_access(*self._args(), block, int(hint),
                                     NEVER if next_use is None else next_use))

    def run(self, blocks: np.ndarray, hints: np.ndarray,
            next_use: np.ndarray | None = None) -> np.ndarray:
        if self.policy.kind is PolicyKind.OPT:
            if next_use is None:
                raise ValueError("OPT needs precomputed next-use positions")
        else:
            next_use = np.empty(0, dtype=np.int64)
        outcome = np.empty(len(blocks), dtype=np.int8)
        if len(blocks):
            self._ensure_regions(int(blocks.max()))
            engine.llc_run(*self._args(), blocks.astype(np.int64, copy=False),
                           hints.astype(np.int8, copy=False),
                           next_use.astype(np.int64, copy=False), outcome)
        return outcome

    @property
    def pinned_count(self) -> int:
        return int(self.ctr[engine.C_PINNED])

    def valid_rrpvs(self) -> np.ndarray:
        return self.rrpv[self.tags != -1]


@dataclass
class LevelStats:
    accesses: int = 0
    hits: int = 0

    @property
    def misses(self) -> int:
        return self.accesses - self.hits

    @property
    def miss_rate(self) -> float:
        return self.misses / self.accesses if self.accesses else 0.0


@dataclass
class SimStats:
    llc: LevelStats
    l1: LevelStats | None = None
    # (accesses, misses) at the LLC keyed by array name / "other" and by hint name
    per_tag: dict[str, tuple[int, int]] = field(default_factory=dict)
    per_hint: dict[str, tuple[int, int]] = field(default_factory=dict)
    evictions: int = 0
    bypasses: int = 0
    pinned_peak: int = 0

    @property
    def llc_misses(self) -> int:
        return self.llc.misses

    @property
    def llc_accesses(self) -> int:
        return self.llc.accesses


@dataclass(frozen=True)
class LlcStream:
    """References that reach the LLC, with everything policy-independent precomputed."""

    blocks: np.ndarray
    addresses: np.ndarray
    tags: np.ndarray
    tag_names: tuple[str, ...]
    l1: LevelStats | None

    def __len__(self):
        return len(self.blocks)

    @cached_property
    def next_use(self) -> np.ndarray:
        return precompute_next_use(self.blocks)


def llc_stream(trace, config: CacheConfig) -> LlcStream:
    """Filter ``trace`` through the L1 (if enabled) to obtain the LLC reference stream."""
    blocks = trace.address >> config.block_bits
    l1 = None
    if config.l1_enabled:
        miss = engine.lru_filter(blocks, config.l1_sets, config.l1_ways)
        l1 = LevelStats(len(blocks), len(blocks) - int(miss.sum()))
        blocks, addresses, tags = blocks[miss], trace.address[miss], trace.tag[miss]
    else:
        addresses, tags = trace.address, trace.tag
    names = tuple(a.name for a in trace.layout.arrays) if trace.layout is not None else ()
    return LlcStream(blocks, addresses, tags, names, l1)


def _grouped(keys: np.ndarray, missed: np.ndarray, size: int):
    acc = np.bincount(keys, minlength=size)
    mis = np.bincount(keys, weights=missed, minlength=size).astype(np.int64)
    return acc, mis


def simulate_llc(stream: LlcStream, config: CacheConfig, policy: Policy,
                 regions: RegionMap | None = None) -> SimStats:
    hints = classify_many(stream.addresses, regions)
    cache = LlcCache(config, policy)
    next_use = stream.next_use if policy.kind is PolicyKind.OPT else None
    outcome = cache.run(stream.blocks, hints, next_use)
    missed = outcome != engine.HIT

    n_named = len(stream.tag_names)
    unnamed = (stream.tags < 0) | (stream.tags >= n_named)
    tag_keys = np.where(unnamed, n_named, stream.tags).astype(np.int64)
    acc, mis = _grouped(tag_keys, missed, n_named + 1)
    per_tag = {name: (int(acc[i]), int(mis[i])) for i, name in enumerate(stream.tag_names)}
    if acc[n_named] or not n_named:
        per_tag["other"] = (int(acc[n_named]), int(mis[n_named]))
    hacc, hmis = _grouped(hints.astype(np.int64), missed, 4)
    per_hint = {h.name.lower(): (int(hacc[h]), int(hmis[h])) for h in ReuseHint}

    return SimStats(
        llc=LevelStats(len(outcome), int(len(outcome) - missed.sum())),
        l1=stream.l1,
        per_tag=per_tag,
        per_hint=per_hint,
        evictions=int(cache.ctr[engine.C_EVICT]),
        bypasses=int(cache.ctr[engine.C_BYPASS]),
        pinned_peak=int(cache.ctr[engine.C_PINNED_PEAK]),
    )


def run_simulation(trace, config: CacheConfig, policy: Policy,
                   regions: RegionMap | None = None) -> SimStats:
    """Replay ``trace``: L1 (LRU, write-allocate) first, L1 misses go to the LLC
    tagged with the reuse hint of their address."""
    return simulate_llc(llc_stream(trace, config), config, policy, regions)


def miss_elimination_over(baseline: SimStats, candidate: SimStats) -> float:
    """Percentage of the baseline's LLC misses that the candidate avoids."""
    if baseline.llc_misses == 0:
        return 0.0
    return 100.0 * (baseline.llc_misses - candidate.llc_misses) / baseline.llc_misses
