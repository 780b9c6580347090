"""Skew-aware vertex reordering: Sort, HubSort and DBG."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .graph import CsrGraph, EdgeList, hot_mask


class ReorderKind(enum.Enum):
    IDENTITY = "none"
    SORT = "sort"
    HUBSORT = "hubsort"
    DBG = "dbg"


@dataclass(frozen=True)
class ReorderAlgo:
    kind: ReorderKind = ReorderKind.IDENTITY
    dbg_group_count: int = 8

    def __post_init__(self):
        if self.kind is ReorderKind.DBG and self.dbg_group_count < 2:
            raise ValueError("DBG needs at least 2 groups")

    @classmethod
    def parse(cls, name: str, dbg_groups: int = 8) -> "ReorderAlgo":
        return cls(ReorderKind(name.lower()), dbg_groups)

    def __str__(self):
        if self.kind is ReorderKind.DBG:
            return f"dbg{self.dbg_group_count}"
        return self.kind.value


@dataclass(frozen=True)
class VertexPermutation:
    """``new_id[old]`` is the id vertex ``old`` receives after reordering."""

    new_id: np.ndarray

    def __len__(self):
        return len(self.new_id)

    @classmethod
    def from_order(cls, order: np.ndarray) -> "VertexPermutation":
        """Build from the list of old ids laid out in new-id order."""
        new_id = np.empty(len(order), dtype=np.int64)
        new_id[order] = np.arange(len(order), dtype=np.int64)
        return cls(new_id)

    def is_bijection(self) -> bool:
        n = len(self.new_id)
        seen = np.zeros(n, dtype=bool)
        if n and (self.new_id.min() < 0 or self.new_id.max() >= n):
            return False
        seen[self.new_id] = True
        return bool(seen.all())

    def inverse_order(self) -> np.ndarray:
        """Old ids listed by new id."""
        order = np.empty_like(self.new_id)
        order[self.new_id] = np.arange(len(self.new_id))
        return order


def dbg_groups(degrees: np.ndarray, edge_count: int, group_count: int) -> np.ndarray:
    """Group index per vertex; 0 is hottest, ``group_count - 1`` holds below-average vertices.

    Group ``j < group_count - 1`` collects degrees >= avg * 2**(group_count - 2 - j)
    not already claimed by a hotter group.
    """
    n = len(degrees)
    scaled = degrees.astype(np.int64) * n  # compare deg >= (m/n) * 2^k without division
    groups = np.full(n, group_count - 1, dtype=np.int64)
    for j in range(group_count - 2, -1, -1):
        k = group_count - 2 - j
        groups[scaled >= edge_count * (1 << k)] = j
    return groups


def reorder(g: CsrGraph, algo: ReorderAlgo) -> VertexPermutation:
    """Permutation placing high-degree vertices of ``g`` at the front of the id space.

    Degree is taken along ``g``'s direction; pass the out-edge CSR when the
    kernel reuses out-degree (pull), the in-edge CSR for push.
    """
    n = g.vertex_count
    if n == 0 or algo.kind is ReorderKind.IDENTITY:
        return VertexPermutation(np.arange(n, dtype=np.int64))
    deg = g.degrees()
    if algo.kind is ReorderKind.SORT:
        order = np.argsort(-deg, kind="stable")
    elif algo.kind is ReorderKind.HUBSORT:
        hot = hot_mask(deg, g.edge_count)
        hot_ids = np.flatnonzero(hot)
        hot_ids = hot_ids[np.argsort(-deg[hot_ids], kind="stable")]
        order = np.concatenate([hot_ids, np.flatnonzero(~hot)])
    else:
        groups = dbg_groups(deg, g.edge_count, algo.dbg_group_count)
        order = np.argsort(groups, kind="stable")
    return VertexPermutation.from_order(order)


def apply_permutation(e: EdgeList, p: VertexPermutation) -> EdgeList:
    if len(p) != e.vertex_count:
        raise ValueError(f"permutation length {len(p)} != vertex_count {e.vertex_count}")
    return EdgeList(e.vertex_count, p.new_id[e.src], p.new_id[e.dst])
