"""Set-associative LLC simulation with LRU, DRRIP, GRASP, SHiP-MEM, PinX and OPT."""
from .config import DRRIP, GRASP, LRU, OPT, SHIP, CacheConfig, Policy, PolicyKind
from .engine import BYPASS, HIT, MISS, NEVER
from .regions import AbrPair, Region, RegionMap, ReuseHint, classify, classify_many
from .sim import (LevelStats, LlcCache, LlcStream, SimStats, llc_stream,
                  miss_elimination_over, precompute_next_use, run_simulation, simulate_llc)

__all__ = [
    "AbrPair", "BYPASS", "CacheConfig", "DRRIP", "GRASP", "HIT", "LRU", "LevelStats",
    "LlcCache", "LlcStream", "MISS", "NEVER", "OPT", "Policy", "PolicyKind", "Region",
    "RegionMap", "ReuseHint", "SHIP", "SimStats", "classify", "classify_many", "llc_stream",
    "miss_elimination_over", "precompute_next_use", "run_simulation", "simulate_llc",
]
