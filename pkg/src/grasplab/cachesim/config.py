from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from . import engine


def _is_pow2(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


@dataclass(frozen=True)
class CacheConfig:
    block_size: int = 64
    llc_sets: int = 1024
    llc_ways: int = 16
    l1_enabled: bool = True
    l1_sets: int = 64
    l1_ways: int = 8

    def __post_init__(self):
        if not _is_pow2(self.block_size):
            raise ValueError("block_size must be a power of two")
        if not _is_pow2(self.llc_sets) or self.llc_ways < 1:
            raise ValueError("llc_sets must be a power of two and llc_ways >= 1")
        if self.l1_enabled:
            if not _is_pow2(self.l1_sets) or self.l1_ways < 1:
                raise ValueError("l1_sets must be a power of two and l1_ways >= 1")
            if self.l1_bytes >= self.llc_bytes:
                raise ValueError("L1 must be smaller than the LLC")

    @classmethod
    def from_llc_bytes(cls, llc_bytes: int, ways: int = 16, block_size: int = 64,
                       **kw) -> "CacheConfig":
        sets, rem = divmod(llc_bytes, ways * block_size)
        if rem or not _is_pow2(sets):
            raise ValueError(f"{llc_bytes} bytes is not a power-of-two number of "
                             f"{ways}-way sets of {block_size}B blocks")
        return cls(block_size=block_size, llc_sets=sets, llc_ways=ways, **kw)

    def with_llc_bytes(self, llc_bytes: int) -> "CacheConfig":
        return CacheConfig.from_llc_bytes(llc_bytes, self.llc_ways, self.block_size,
                                          l1_enabled=self.l1_enabled,
                                          l1_sets=self.l1_sets, l1_ways=self.l1_ways)

    @property
    def block_bits(self) -> int:
        return self.block_size.bit_length() - 1

    @property
    def llc_lines(self) -> int:
        return self.llc_sets * self.llc_ways

    @property
    def llc_bytes(self) -> int:
        return self.block_size * self.llc_lines

    @property
    def l1_bytes(self) -> int:
        return self.block_size * self.l1_sets * self.l1_ways


class PolicyKind(enum.Enum):
    LRU = engine.LRU
    DRRIP = engine.DRRIP
    GRASP = engine.GRASP
    SHIP = engine.SHIP
    PIN = engine.PIN
    OPT = engine.OPT


@dataclass(frozen=True)
class Policy:
    """Replacement policy selection.

    ``pin_percent`` applies to PIN only. ``opt_bypass`` lets OPT leave the
    incoming block uncached when it is the one referenced farthest in the future.
    """

    kind: PolicyKind
    pin_percent: int = 0
    opt_bypass: bool = True

    def __post_init__(self):
        if self.kind is PolicyKind.PIN and not 0 < self.pin_percent <= 100:
            raise ValueError("pin_percent must be in (0, 100]")

    @classmethod
    def parse(cls, name: str) -> "Policy":
        name = name.strip().lower()
        if m := re.fullmatch(r"pin(\d+)", name):
            return cls(PolicyKind.PIN, int(m.group(1)))
        if name == "opt-nobypass":
            return cls(PolicyKind.OPT, opt_bypass=False)
        aliases = {"ship": "SHIP", "shipmem": "SHIP", "ship-mem": "SHIP", "rrip": "DRRIP"}
        try:
            return cls(PolicyKind[aliases.get(name, name.upper())])
        except KeyError:
            raise ValueError(f"unknown policy {name!r}") from None

    def __str__(self):
        if self.kind is PolicyKind.PIN:
            return f"pin{self.pin_percent}"
        if self.kind is PolicyKind.OPT and not self.opt_bypass:
            return "opt-nobypass"
        return self.kind.name.lower()

    def pin_budget(self, config: CacheConfig) -> int:
        if self.kind is not PolicyKind.PIN:
            return 0
        return config.llc_lines * self.pin_percent // 100

    @property
    def uses_hints(self) -> bool:
        return self.kind in (PolicyKind.GRASP, PolicyKind.PIN)


LRU = Policy(PolicyKind.LRU)
DRRIP = Policy(PolicyKind.DRRIP)
GRASP = Policy(PolicyKind.GRASP)
SHIP = Policy(PolicyKind.SHIP)
OPT = Policy(PolicyKind.OPT)
