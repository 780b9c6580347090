"""Virtual memory layout of a vertex-centric application and its access traces."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from os import PathLike
from typing import Iterator, NamedTuple

import numpy as np

from .graph import CsrGraph, Direction

LAYOUT_BASE = 0x1000_0000
PAGE = 4096
NO_TAG = -1

# binary dump record: little-endian address, flags (bit0 = write), array tag (0xFF = none)
DUMP_DTYPE = np.dtype([("addr", "<u8"), ("flags", "u1"), ("tag", "u1")])


class ArrayKind(enum.Enum):
    VERTEX = "vertex"
    EDGE = "edge"
    PROPERTY = "property"


@dataclass(frozen=True)
class ArrayDescriptor:
    name: str
    kind: ArrayKind
    base: int
    elem_size: int
    length: int

    @property
    def end(self) -> int:
        return self.base + self.elem_size * self.length

    def addr(self, i):
        return self.base + self.elem_size * i

    def contains(self, address: int) -> bool:
        return self.base <= address < self.end


@dataclass(frozen=True)
class MemoryLayout:
    arrays: tuple[ArrayDescriptor, ...]

    @property
    def property_arrays(self) -> tuple[ArrayDescriptor, ...]:
        return tuple(a for a in self.arrays if a.kind is ArrayKind.PROPERTY)

    def index(self, name: str) -> int:
        for i, a in enumerate(self.arrays):
            if a.name == name:
                return i
        raise KeyError(name)

    def __getitem__(self, name: str) -> ArrayDescriptor:
        return self.arrays[self.index(name)]

    def tag_kinds(self) -> list[ArrayKind]:
        return [a.kind for a in self.arrays]


class MemoryAccess(NamedTuple):
    address: int
    is_write: bool
    array_tag: int | None


@dataclass(frozen=True)
class AccessTrace:
    """Parallel arrays: byte address, write flag, and index into ``layout.arrays`` (-1 = none)."""

    address: np.ndarray
    is_write: np.ndarray
    tag: np.ndarray
    layout: MemoryLayout | None = None

    def __len__(self):
        return len(self.address)

    def __iter__(self) -> Iterator[MemoryAccess]:
        for a, w, t in zip(self.address.tolist(), self.is_write.tolist(), self.tag.tolist()):
            yield MemoryAccess(a, w, None if t == NO_TAG else t)

    def repeat(self, times: int) -> "AccessTrace":
        return AccessTrace(np.tile(self.address, times), np.tile(self.is_write, times),
                           np.tile(self.tag, times), self.layout)


def _align(x: int, to: int) -> int:
    return (x + to - 1) // to * to


def build_layout(n: int, m: int, n_property_arrays: int = 1) -> MemoryLayout:
    """Vertex (8B x n+1), Edge (4B x m) and Property (8B x n) arrays, page aligned,
    each followed by a one-page guard gap."""
    if n < 1:
        raise ValueError("layout needs at least one vertex")
    if n_property_arrays not in (1, 2):
        raise ValueError("n_property_arrays must be 1 or 2")
    specs = [("vertex", ArrayKind.VERTEX, 8, n + 1), ("edge", ArrayKind.EDGE, 4, m)]
    if n_property_arrays == 1:
        specs.append(("property", ArrayKind.PROPERTY, 8, n))
    else:
        specs += [("property_src", ArrayKind.PROPERTY, 8, n),
                  ("property_dst", ArrayKind.PROPERTY, 8, n)]
    arrays = []
    cursor = LAYOUT_BASE
    for name, kind, size, length in specs:
        arrays.append(ArrayDescriptor(name, kind, cursor, size, length))
        cursor = _align(cursor + size * length, PAGE) + PAGE
    return MemoryLayout(tuple(arrays))


def _property_pair(layout: MemoryLayout) -> tuple[int, int]:
    """Tags of the (read-side, write-side) property arrays; equal when merged."""
    props = [i for i, a in enumerate(layout.arrays) if a.kind is ArrayKind.PROPERTY]
    if not props:
        raise ValueError("layout has no property array")
    return props[0], props[-1]


def _check_layout(g: CsrGraph, layout: MemoryLayout):
    v = layout.arrays[0]
    e = layout.arrays[1]
    if v.kind is not ArrayKind.VERTEX or e.kind is not ArrayKind.EDGE:
        raise ValueError("layout must start with the vertex and edge arrays")
    if v.length != g.vertex_count + 1 or e.length != g.edge_count:
        raise ValueError("layout was built for a different graph size")


def trace_pagerank_pull(g_in: CsrGraph, layout: MemoryLayout) -> AccessTrace:
    """One pull iteration: for each vertex d, read its offsets, then per in-edge the
    edge entry and the source's property, then write d's property."""
    if g_in.direction is not Direction.IN_EDGES:
        raise ValueError("pull tracing needs the in-edge CSR")
    _check_layout(g_in, layout)
    n, m = g_in.vertex_count, g_in.edge_count
    vtx, edg = layout.arrays[0], layout.arrays[1]
    src_tag, dst_tag = _property_pair(layout)
    p_src, p_dst = layout.arrays[src_tag], layout.arrays[dst_tag]

    total = 3 * n + 2 * m
    addr = np.empty(total, dtype=np.int64)
    tag = np.empty(total, dtype=np.int8)
    is_write = np.zeros(total, dtype=bool)

    v = np.arange(n, dtype=np.int64)
    start = 3 * v + 2 * g_in.offsets[:-1]
    addr[start] = vtx.addr(v)
    addr[start + 1] = vtx.addr(v + 1)
    tag[start] = tag[start + 1] = 0

    e = np.arange(m, dtype=np.int64)
    owner = np.repeat(v, g_in.degrees())
    epos = 3 * owner + 2 + 2 * e
    addr[epos] = edg.addr(e)
    tag[epos] = 1
    addr[epos + 1] = p_src.addr(g_in.neighbors)
    tag[epos + 1] = src_tag

    wpos = start + 2 + 2 * g_in.degrees()
    addr[wpos] = p_dst.addr(v)
    tag[wpos] = dst_tag
    is_write[wpos] = True
    return AccessTrace(addr, is_write, tag, layout)


def trace_sssp_push(g_out: CsrGraph, layout: MemoryLayout, rounds: int = 1) -> AccessTrace:
    """Bellman-Ford rounds over all vertices: each source reads its offsets and
    distance, then per out-edge reads the edge entry and read-modify-writes the
    destination's distance."""
    if g_out.direction is not Direction.OUT_EDGES:
        raise ValueError("push tracing needs the out-edge CSR")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    _check_layout(g_out, layout)
    n, m = g_out.vertex_count, g_out.edge_count
    vtx, edg = layout.arrays[0], layout.arrays[1]
    src_tag, dst_tag = _property_pair(layout)
    p_src, p_dst = layout.arrays[src_tag], layout.arrays[dst_tag]

    total = 3 * n + 3 * m
    addr = np.empty(total, dtype=np.int64)
    tag = np.empty(total, dtype=np.int8)
    is_write = np.zeros(total, dtype=bool)

    v = np.arange(n, dtype=np.int64)
    start = 3 * v + 3 * g_out.offsets[:-1]
    addr[start] = vtx.addr(v)
    addr[start + 1] = vtx.addr(v + 1)
    tag[start] = tag[start + 1] = 0
    addr[start + 2] = p_src.addr(v)
    tag[start + 2] = src_tag

    e = np.arange(m, dtype=np.int64)
    owner = np.repeat(v, g_out.degrees())
    epos = 3 * owner + 3 + 3 * e
    addr[epos] = edg.addr(e)
    tag[epos] = 1
    dst_addr = p_dst.addr(g_out.neighbors)
    addr[epos + 1] = dst_addr
    addr[epos + 2] = dst_addr
    tag[epos + 1] = tag[epos + 2] = dst_tag
    is_write[epos + 2] = True

    one = AccessTrace(addr, is_write, tag, layout)
    return one if rounds == 1 else one.repeat(rounds)


@dataclass(frozen=True)
class TraceBreakdown:
    total: int
    counts: dict[str, int]

    def fraction(self, kind: str) -> float:
        return self.counts.get(kind, 0) / self.total if self.total else 0.0

    @property
    def property_fraction(self) -> float:
        return self.fraction(ArrayKind.PROPERTY.value)

    def fractions(self) -> dict[str, float]:
        return {k: self.fraction(k) for k in self.counts}


def breakdown_by_kind(tags: np.ndarray, layout: MemoryLayout | None) -> TraceBreakdown:
    """Access counts per array kind (``other`` for untagged accesses)."""
    counts = {k.value: 0 for k in ArrayKind}
    counts["other"] = 0
    if len(tags):
        per_tag = np.bincount(tags.astype(np.int64) + 1)
        counts["other"] += int(per_tag[0])
        kinds = layout.tag_kinds() if layout is not None else []
        for t, c in enumerate(per_tag[1:].tolist()):
            key = kinds[t].value if t < len(kinds) else "other"
            counts[key] += c
    return TraceBreakdown(len(tags), counts)


def trace_breakdown(t: AccessTrace) -> TraceBreakdown:
    return breakdown_by_kind(t.tag, t.layout)


def dump_trace(t: AccessTrace, path: str | PathLike) -> None:
    rec = np.empty(len(t), dtype=DUMP_DTYPE)
    rec["addr"] = t.address
    rec["flags"] = t.is_write
    rec["tag"] = np.where(t.tag == NO_TAG, 0xFF, t.tag)
    rec.tofile(path)


def load_trace(path: str | PathLike, layout: MemoryLayout | None = None) -> AccessTrace:
    rec = np.fromfile(path, dtype=DUMP_DTYPE)
    tag = rec["tag"].astype(np.int16)
    tag[tag == 0xFF] = NO_TAG
    return AccessTrace(rec["addr"].astype(np.int64), (rec["flags"] & 1).astype(bool),
                       tag.astype(np.int8), layout)
