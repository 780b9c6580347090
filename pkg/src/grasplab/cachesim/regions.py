"""Address-bound registers and reuse-region classification of LLC accesses."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import engine


class ReuseHint(enum.IntEnum):
    HIGH = engine.HIGH
    MODERATE = engine.MODERATE
    LOW = engine.LOW
    DEFAULT = engine.DEFAULT


@dataclass(frozen=True)
class AbrPair:
    start: int
    end: int  # exclusive

    def __post_init__(self):
        if self.start >= self.end:
            raise ValueError(f"empty ABR range [{self.start:#x}, {self.end:#x})")


@dataclass(frozen=True)
class Region:
    start: int
    end: int

    def __contains__(self, address) -> bool:
        return self.start <= address < self.end


@dataclass(frozen=True)
class RegionMap:
    """High/Moderate reuse regions, one pair per property array."""

    high: tuple[Region, ...]
    moderate: tuple[Region, ...]
    region_bytes: int

    @classmethod
    def from_abrs(cls, abrs, llc_bytes: int) -> "RegionMap":
        """Split the LLC capacity evenly among the arrays; each array's first
        share is its High region and the next share (clipped) its Moderate one."""
        abrs = sorted(abrs, key=lambda p: p.start)
        if not abrs:
            raise ValueError("at least one ABR pair is required")
        for a, b in zip(abrs, abrs[1:]):
            if b.start < a.end:
                raise ValueError("ABR ranges overlap")
        size = llc_bytes // len(abrs)
        if size <= 0:
            raise ValueError("LLC capacity too small for the number of property arrays")
        high, moderate = [], []
        for p in abrs:
            h_end = min(p.start + size, p.end)
            high.append(Region(p.start, h_end))
            moderate.append(Region(h_end, min(h_end + size, p.end)))
        return cls(tuple(high), tuple(moderate), size)

    @classmethod
    def from_layout(cls, layout, llc_bytes: int) -> "RegionMap":
        return cls.from_abrs([AbrPair(a.base, a.end) for a in layout.property_arrays],
                             llc_bytes)


def classify(address: int, regions: RegionMap | None) -> ReuseHint:
    if regions is None:
        return ReuseHint.DEFAULT
    if any(address in r for r in regions.high):
        return ReuseHint.HIGH
    if any(address in r for r in regions.moderate):
        return ReuseHint.MODERATE
    return ReuseHint.LOW


def classify_many(addresses: np.ndarray, regions: RegionMap | None) -> np.ndarray:
    """Vectorised :func:`classify`; returns int8 hint codes."""
    if regions is None:
        return np.full(len(addresses), engine.DEFAULT, dtype=np.int8)
    hints = np.full(len(addresses), engine.LOW, dtype=np.int8)
    for r in regions.moderate:
        hints[(addresses >= r.start) & (addresses < r.end)] = engine.MODERATE
    for r in regions.high:
        hints[(addresses >= r.start) & (addresses < r.end)] = engine.HIGH
    return hints
