"""Directed graphs in CSR form, R-MAT generation and degree-skew statistics."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from os import PathLike

import numpy as np

VERTEX_DTYPE = np.int64


class GraphParseError(ValueError):
    """Malformed edge-list input."""

    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno


class Direction(enum.Enum):
    IN_EDGES = "in"
    OUT_EDGES = "out"


@dataclass(frozen=True)
class EdgeList:
    """``vertex_count`` vertices and parallel ``src``/``dst`` endpoint arrays.

    Duplicate edges and self-loops are kept as given.
    """

    vertex_count: int
    src: np.ndarray
    dst: np.ndarray

    def __post_init__(self):
        src = np.ascontiguousarray(self.src, dtype=VERTEX_DTYPE)
        dst = np.ascontiguousarray(self.dst, dtype=VERTEX_DTYPE)
        if src.shape != dst.shape or src.ndim != 1:
            raise ValueError("src and dst must be 1-d arrays of equal length")
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        if len(src) and (min(src.min(), dst.min()) < 0
                         or max(src.max(), dst.max()) >= self.vertex_count):
            raise ValueError("edge endpoint outside [0, vertex_count)")
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs) -> "EdgeList":
        arr = np.asarray(list(pairs), dtype=VERTEX_DTYPE).reshape(-1, 2)
        return cls(vertex_count, arr[:, 0], arr[:, 1])

    @property
    def edge_count(self) -> int:
        return len(self.src)

    def __len__(self):
        return len(self.src)

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist()))


@dataclass(frozen=True)
class CsrGraph:
    direction: Direction
    offsets: np.ndarray
    neighbors: np.ndarray

    @property
    def vertex_count(self) -> int:
        return len(self.offsets) - 1

    @property
    def edge_count(self) -> int:
        return len(self.neighbors)

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def neighbors_of(self, v: int) -> np.ndarray:
        return self.neighbors[self.offsets[v]:self.offsets[v + 1]]


@dataclass(frozen=True)
class RmatParams:
    scale: int
    avg_degree: int
    a: float = 0.57
    b: float = 0.19
    c: float = 0.19
    d: float = 0.05
    seed: int = 0
    # relabel vertices with a seeded random permutation (Graph500 style) so
    # that low ids are not hot by construction
    scramble: bool = True

    def __post_init__(self):
        if self.scale < 1:
            raise ValueError("scale must be >= 1")
        if self.avg_degree < 1:
            raise ValueError("avg_degree must be >= 1")
        probs = (self.a, self.b, self.c, self.d)
        if min(probs) < 0 or abs(sum(probs) - 1.0) > 1e-9:
            raise ValueError(f"quadrant probabilities must sum to 1, got {probs}")

    @classmethod
    def uniform(cls, scale: int, avg_degree: int, seed: int = 0) -> "RmatParams":
        return cls(scale, avg_degree, 0.25, 0.25, 0.25, 0.25, seed)

    @property
    def vertex_count(self) -> int:
        return 1 << self.scale

    @property
    def edge_count(self) -> int:
        return self.vertex_count * self.avg_degree


@dataclass(frozen=True)
class DegreeSkewReport:
    vertex_count: int
    edge_count: int
    avg_in_degree: float
    avg_out_degree: float
    hot_fraction_in: float
    edge_coverage_in: float
    hot_fraction_out: float
    edge_coverage_out: float
    hot_count_in: int = field(default=0)
    hot_count_out: int = field(default=0)

    def format_table(self) -> str:
        rows = [
            ("", "in-edges", "out-edges"),
            ("avg degree", f"{self.avg_in_degree:.2f}", f"{self.avg_out_degree:.2f}"),
            ("hot vertices", f"{100 * self.hot_fraction_in:.1f}%",
             f"{100 * self.hot_fraction_out:.1f}%"),
            ("edge coverage", f"{100 * self.edge_coverage_in:.1f}%",
             f"{100 * self.edge_coverage_out:.1f}%"),
        ]
        head = f"vertices={self.vertex_count} edges={self.edge_count}"
        return "\n".join([head] + [f"{a:<14}{b:>12}{c:>12}" for a, b, c in rows])


def load_edge_list(path: str | PathLike) -> EdgeList:
    """Parse a whitespace-separated ``src dst [weight]`` file; ``#`` starts a comment."""
    src: list[int] = []
    dst: list[int] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].split()
            if not body:
                continue
            if len(body) not in (2, 3):
                raise GraphParseError(lineno, line.rstrip("\n"), "expected 'src dst [weight]'")
            try:
                s, d = int(body[0]), int(body[1])
            except ValueError:
                raise GraphParseError(lineno, line.rstrip("\n"), "non-integer vertex id") from None
            if s < 0 or d < 0:
                raise GraphParseError(lineno, line.rstrip("\n"), "negative vertex id")
            src.append(s)
            dst.append(d)
    n = max(max(src), max(dst)) + 1 if src else 0
    return EdgeList(n, np.array(src, dtype=VERTEX_DTYPE), np.array(dst, dtype=VERTEX_DTYPE))


def generate_rmat(params: RmatParams) -> EdgeList:
    """Recursive-quadrant (R-MAT) edge sampler, deterministic for a fixed seed."""
    rng = np.random.Generator(np.random.PCG64(params.seed))
    m = params.edge_count
    src = np.zeros(m, dtype=VERTEX_DTYPE)
    dst = np.zeros(m, dtype=VERTEX_DTYPE)
    ab = params.a + params.b
    abc = ab + params.c
    for level in range(params.scale):
        r = rng.random(m)
        # quadrant order: a=(0,0) b=(0,1) c=(1,0) d=(1,1)
        src_bit = r >= ab
        dst_bit = ((r >= params.a) & (r < ab)) | (r >= abc)
        bit = VERTEX_DTYPE(1 << level)
        src |= src_bit * bit
        dst |= dst_bit * bit
    if params.scramble:
        relabel = rng.permutation(params.vertex_count).astype(VERTEX_DTYPE)
        src = relabel[src]
        dst = relabel[dst]
    return EdgeList(params.vertex_count, src, dst)


def build_csr(edges: EdgeList, direction: Direction) -> CsrGraph:
    """Group edges by destination (in-edges) or source (out-edges), keeping input order."""
    if direction is Direction.IN_EDGES:
        key, other = edges.dst, edges.src
    else:
        key, other = edges.src, edges.dst
    counts = np.bincount(key, minlength=edges.vertex_count)
    offsets = np.zeros(edges.vertex_count + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    order = np.argsort(key, kind="stable")
    return CsrGraph(direction, offsets, other[order])


def hot_mask(degrees: np.ndarray, edge_count: int) -> np.ndarray:
    """Vertices whose degree is at least the average (exact integer comparison)."""
    n = len(degrees)
    return degrees.astype(np.int64) * n >= edge_count


def degree_skew_report(g_in: CsrGraph, g_out: CsrGraph) -> DegreeSkewReport:
    if g_in.direction is not Direction.IN_EDGES or g_out.direction is not Direction.OUT_EDGES:
        raise ValueError("expected an in-edge CSR and an out-edge CSR")
    if g_in.vertex_count != g_out.vertex_count or g_in.edge_count != g_out.edge_count:
        raise ValueError("in- and out-edge CSRs describe different graphs")
    n, m = g_in.vertex_count, g_in.edge_count
    if n == 0:
        return DegreeSkewReport(0, 0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def stats(g):
        deg = g.degrees()
        hot = hot_mask(deg, m)
        hot_edges = int(deg[hot].sum())
        return int(hot.sum()), (hot_edges / m if m else 1.0)

    hot_in, cov_in = stats(g_in)
    hot_out, cov_out = stats(g_out)
    return DegreeSkewReport(
        vertex_count=n,
        edge_count=m,
        avg_in_degree=m / n,
        avg_out_degree=m / n,
        hot_fraction_in=hot_in / n,
        edge_coverage_in=cov_in,
        hot_fraction_out=hot_out / n,
        edge_coverage_out=cov_out,
        hot_count_in=hot_in,
        hot_count_out=hot_out,
    )
