"""Bipartite user/base-station connectivity graphs.

An edge ``(i, j)`` is present iff user ``i``'s beam covers station ``j``.
The graph stores dual incidence lists (user->stations and station->users)
in CSR form so that the peeling decoder has O(1) access from both sides.

Two builders produce identical edge sets: ``build_graph`` tests all pairs,
``build_graph_indexed`` buckets stations on a uniform grid and only tests
the 3x3 cell neighborhood of each user. Both evaluate the same coverage
arithmetic, so their outputs agree bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .geometry import Deployment, beam_trig, coverage_mask

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def concat_ranges(starts: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """Concatenate ``arange(s, s + c)`` for each (s, c) pair, vectorized."""
    counts = np.asarray(counts, dtype=np.int64)
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    ends = np.cumsum(counts)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(ends - counts, counts)
    return np.repeat(np.asarray(starts, dtype=np.int64), counts) + offsets


@dataclass(frozen=True, eq=False)
class ConnectivityGraph:
    """Immutable bipartite graph between ``n_ue`` users and ``n_bs`` stations.

    ``ue_ptr``/``ue_adj`` give each user's station neighbors (sorted), and
    ``bs_ptr``/``bs_adj`` each station's user neighbors (sorted). Both views
    describe the same duplicate-free edge set.
    """

    n_ue: int
    n_bs: int
    ue_ptr: np.ndarray
    ue_adj: np.ndarray
    bs_ptr: np.ndarray
    bs_adj: np.ndarray

    def __post_init__(self) -> None:
        for arr in (self.ue_ptr, self.ue_adj, self.bs_ptr, self.bs_adj):
            arr.setflags(write=False)

    @classmethod
    def from_edges(
        cls, n_ue: int, n_bs: int, ue_idx: np.ndarray, bs_idx: np.ndarray
    ) -> "ConnectivityGraph":
        """Build a graph from parallel edge index arrays (duplicates dropped)."""
        ue_idx = np.asarray(ue_idx, dtype=np.int64)
        bs_idx = np.asarray(bs_idx, dtype=np.int64)
        if ue_idx.shape != bs_idx.shape:
            raise ValueError("edge index arrays must be parallel")
        if ue_idx.size:
            if ue_idx.min() < 0 or ue_idx.max() >= n_ue:
                raise ValueError("user index out of range")
            if bs_idx.min() < 0 or bs_idx.max() >= n_bs:
                raise ValueError("station index out of range")
            key = np.unique(ue_idx * n_bs + bs_idx)
            ue_idx = key // n_bs
            bs_idx = key % n_bs
        ue_ptr = np.zeros(n_ue + 1, dtype=np.int64)
        np.cumsum(np.bincount(ue_idx, minlength=n_ue), out=ue_ptr[1:])
        ue_adj = bs_idx  # unique-key order is already (ue, bs)-sorted
        order = np.argsort(bs_idx, kind="stable")
        bs_ptr = np.zeros(n_bs + 1, dtype=np.int64)
        np.cumsum(np.bincount(bs_idx, minlength=n_bs), out=bs_ptr[1:])
        bs_adj = ue_idx[order]
        return cls(
            n_ue=int(n_ue),
            n_bs=int(n_bs),
            ue_ptr=ue_ptr,
            ue_adj=ue_adj,
            bs_ptr=bs_ptr,
            bs_adj=bs_adj,
        )

    @property
    def n_edges(self) -> int:
        return int(self.ue_adj.size)

    def ue_degrees(self) -> np.ndarray:
        return np.diff(self.ue_ptr)

    def bs_degrees(self) -> np.ndarray:
        return np.diff(self.bs_ptr)

    def ue_neighbors(self, i: int) -> np.ndarray:
        return self.ue_adj[self.ue_ptr[i] : self.ue_ptr[i + 1]]

    def bs_neighbors(self, j: int) -> np.ndarray:
        return self.bs_adj[self.bs_ptr[j] : self.bs_ptr[j + 1]]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Edges as parallel (user, station) arrays sorted by user then station."""
        return np.repeat(np.arange(self.n_ue, dtype=np.int64), self.ue_degrees()), self.ue_adj

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConnectivityGraph):
            return NotImplemented
        return (
            self.n_ue == other.n_ue
            and self.n_bs == other.n_bs
            and np.array_equal(self.ue_ptr, other.ue_ptr)
            and np.array_equal(self.ue_adj, other.ue_adj)
        )

    def to_edge_list_text(self) -> str:
        """Serialize as the diffable edge-list format.

        Header line ``ue <n_ue> bs <n_bs>`` followed by one ``u<i> b<j>``
        line per edge, sorted by user index then station index.
        """
        ue, bs = self.edge_arrays()
        lines = [f"ue {self.n_ue} bs {self.n_bs}"]
        lines.extend(f"u{i} b{j}" for i, j in zip(ue, bs))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DegreeStats:
    ue_histogram: dict[int, int]
    bs_histogram: dict[int, int]
    mean_ue_degree: float
    mean_bs_degree: float


def build_graph(deployment: Deployment, chunk: int = 256) -> ConnectivityGraph:
    """Exact all-pairs graph construction, O(n_ue * n_bs) coverage tests."""
    n_ue, n_bs = deployment.n_ue, deployment.n_bs
    if n_ue == 0 or n_bs == 0:
        return ConnectivityGraph.from_edges(
            n_ue, n_bs, np.empty(0, np.int64), np.empty(0, np.int64)
        )
    trig = beam_trig(deployment)
    ue_parts, bs_parts = [], []
    all_bs = np.arange(n_bs, dtype=np.int64)
    for lo in range(0, n_ue, chunk):
        hi = min(lo + chunk, n_ue)
        ue_grid = np.repeat(np.arange(lo, hi, dtype=np.int64), n_bs)
        bs_grid = np.tile(all_bs, hi - lo)
        mask = coverage_mask(deployment, ue_grid, bs_grid, trig)
        ue_parts.append(ue_grid[mask])
        bs_parts.append(bs_grid[mask])
    return ConnectivityGraph.from_edges(
        n_ue, n_bs, np.concatenate(ue_parts), np.concatenate(bs_parts)
    )


@njit(cache=True)
def _scan_cells(
    ue_xy,
    ue_cx,
    ue_cy,
    ue_r,
    cos_alpha,
    sin_alpha,
    cos_half,
    is_full,
    bs_xy_sorted,
    bs_orig,
    cell_start,
    cells_x,
    cells_y,
    width,
    height,
    torus,
    out_ue,
    out_bs,
    fill,
):
    """Count (fill=False) or emit (fill=True) covered pairs via the cell grid.

    The arithmetic (wrap, squared distance, boresight projection) mirrors
    the vectorized numpy path operation for operation, so both builders make
    identical floating-point decisions.
    """
    half_w = width * 0.5
    half_h = height * 0.5
    k = 0
    for i in range(ue_xy.shape[0]):
        x = ue_xy[i, 0]
        y = ue_xy[i, 1]
        r2 = ue_r[i] * ue_r[i]
        ca = cos_alpha[i]
        sa = sin_alpha[i]
        ch = cos_half[i]
        full = is_full[i]
        for ox in range(-1, 2):
            cx = ue_cx[i] + ox
            if torus:
                cx = (cx + cells_x) % cells_x
            elif cx < 0 or cx >= cells_x:
                continue
            for oy in range(-1, 2):
                cy = ue_cy[i] + oy
                if torus:
                    cy = (cy + cells_y) % cells_y
                elif cy < 0 or cy >= cells_y:
                    continue
                cell = cx * cells_y + cy
                for t in range(cell_start[cell], cell_start[cell + 1]):
                    dx = bs_xy_sorted[t, 0] - x
                    dy = bs_xy_sorted[t, 1] - y
                    if torus:
                        if dx > half_w:
                            dx = dx - width
                        elif dx < -half_w:
                            dx = dx + width
                        if dy > half_h:
                            dy = dy - height
                        elif dy < -half_h:
                            dy = dy + height
                    d2 = dx * dx + dy * dy
                    if d2 > r2:
                        continue
                    if not full:
                        if dx * ca + dy * sa < math.sqrt(d2) * ch:
                            continue
                    if fill:
                        out_ue[k] = i
                        out_bs[k] = bs_orig[t]
                    k += 1
    return k


def _grid_layout(deployment: Deployment):
    """Cell counts and per-point cell coordinates, or None if grid too coarse."""
    region = deployment.region
    r_max = float(deployment.ue_r.max())
    cells_x = int(region.width // r_max) if r_max < region.width else 0
    cells_y = int(region.height // r_max) if r_max < region.height else 0
    if min(cells_x, cells_y) < 3:
        return None
    cell_w = region.width / cells_x
    cell_h = region.height / cells_y

    def cell_of(xy: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        cx = np.minimum((xy[:, 0] / cell_w).astype(np.int64), cells_x - 1)
        cy = np.minimum((xy[:, 1] / cell_h).astype(np.int64), cells_y - 1)
        return cx, cy

    return cells_x, cells_y, cell_of


def build_graph_indexed(deployment: Deployment) -> ConnectivityGraph:
    """Grid-accelerated graph construction, identical output to ``build_graph``.

    Stations are bucketed on a uniform grid with cell side >= the maximum
    beam range, so each user only tests stations in its 3x3 cell
    neighborhood. Falls back to the all-pairs path when the grid would be
    smaller than 3x3 cells (e.g. beam range comparable to the region side).
    """
    n_ue, n_bs = deployment.n_ue, deployment.n_bs
    if n_ue == 0 or n_bs == 0:
        return build_graph(deployment)
    layout = _grid_layout(deployment)
    if layout is None:
        return build_graph(deployment)
    cells_x, cells_y, cell_of = layout
    bs_cx, bs_cy = cell_of(deployment.bs_positions)
    bs_cell = bs_cx * cells_y + bs_cy
    order = np.argsort(bs_cell, kind="stable")
    cell_start = np.zeros(cells_x * cells_y + 1, dtype=np.int64)
    np.cumsum(np.bincount(bs_cell, minlength=cells_x * cells_y), out=cell_start[1:])
    ue_cx, ue_cy = cell_of(deployment.ue_positions)
    trig = beam_trig(deployment)
    torus = deployment.region.boundary_mode == "torus"

    if _HAVE_NUMBA:
        args = (
            np.ascontiguousarray(deployment.ue_positions),
            ue_cx,
            ue_cy,
            deployment.ue_r,
            trig.cos_alpha,
            trig.sin_alpha,
            trig.cos_half_theta,
            trig.is_full,
            np.ascontiguousarray(deployment.bs_positions[order]),
            order,
            cell_start,
            cells_x,
            cells_y,
            float(deployment.region.width),
            float(deployment.region.height),
            torus,
        )
        dummy = np.empty(0, dtype=np.int64)
        count = _scan_cells(*args, dummy, dummy, False)
        out_ue = np.empty(count, dtype=np.int64)
        out_bs = np.empty(count, dtype=np.int64)
        _scan_cells(*args, out_ue, out_bs, True)
        return ConnectivityGraph.from_edges(n_ue, n_bs, out_ue, out_bs)

    # numpy fallback: gather candidates per neighbor offset, then mask
    sorted_cell = bs_cell[order]
    all_ue = np.arange(n_ue, dtype=np.int64)
    ue_parts, bs_parts = [], []
    for ox in (-1, 0, 1):
        for oy in (-1, 0, 1):
            nx = ue_cx + ox
            ny = ue_cy + oy
            if torus:
                nx = np.mod(nx, cells_x)
                ny = np.mod(ny, cells_y)
                valid = all_ue
            else:
                keep = (nx >= 0) & (nx < cells_x) & (ny >= 0) & (ny < cells_y)
                valid = all_ue[keep]
                nx, ny = nx[keep], ny[keep]
            if valid.size == 0:
                continue
            target = nx * cells_y + ny
            left = np.searchsorted(sorted_cell, target, side="left")
            right = np.searchsorted(sorted_cell, target, side="right")
            counts = right - left
            cand = order[concat_ranges(left, counts)]
            ue_rep = np.repeat(valid, counts)
            if ue_rep.size == 0:
                continue
            mask = coverage_mask(deployment, ue_rep, cand, trig)
            ue_parts.append(ue_rep[mask])
            bs_parts.append(cand[mask])
    if not ue_parts:
        return ConnectivityGraph.from_edges(
            n_ue, n_bs, np.empty(0, np.int64), np.empty(0, np.int64)
        )
    return ConnectivityGraph.from_edges(
        n_ue, n_bs, np.concatenate(ue_parts), np.concatenate(bs_parts)
    )


def degree_stats(graph: ConnectivityGraph) -> DegreeStats:
    """Exact degree histograms and mean degrees for both sides."""
    ue_deg = graph.ue_degrees()
    bs_deg = graph.bs_degrees()

    def hist(deg: np.ndarray) -> dict[int, int]:
        counts = np.bincount(deg) if deg.size else np.empty(0, np.int64)
        return {int(d): int(c) for d, c in enumerate(counts) if c > 0}

    return DegreeStats(
        ue_histogram=hist(ue_deg),
        bs_histogram=hist(bs_deg),
        mean_ue_degree=float(ue_deg.mean()) if ue_deg.size else 0.0,
        mean_bs_degree=float(bs_deg.mean()) if bs_deg.size else 0.0,
    )


def theoretical_degree_pmf(mean: float, d_max: int) -> list[float]:
    """Poisson degree probabilities ``P(deg = d)`` for ``d = 0 .. d_max``."""
    if mean < 0:
        raise ValueError(f"mean must be non-negative, got {mean}")
    if d_max < 0:
        raise ValueError(f"d_max must be non-negative, got {d_max}")
    return [float(p) for p in stats.poisson.pmf(np.arange(d_max + 1), mean)]
