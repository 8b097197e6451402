"""Inverse-distance-weighted smoothing and gap filling of WSE rasters.

Filling extends each flood surface to nearby nodata cells so that every
cell inside the widest flood extent can see a surface elevation for every
layer. Smoothing additionally blends each data cell with the IDW average of
its neighbourhood; it is opt-in because perturbing engineered flood
surfaces by default is rarely what you want.

Distances are Euclidean centre-to-centre in cell units; the search window
is the Chebyshev box of ``radius_cells``. Neighbour selection is fully
deterministic: candidates take the nearest ``max_neighbors`` data cells,
with distance ties broken by (row offset, column offset) ascending. All
reads come from the input raster, never the output under construction, so
results are independent of cell visitation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .hazard import HazardStack, ReturnPeriodLayer
from .raster import Raster, locked


class IdwMode(Enum):
    FILL_ONLY = "fill"
    SMOOTH_ALL = "smooth"


@dataclass(frozen=True)
class IdwParams:
    """Weighting and search parameters; weights are 1/distance**power."""

    power: float = 2.0
    radius_cells: int = 10
    max_neighbors: int = 16
    min_neighbors: int = 1
    mode: IdwMode = IdwMode.FILL_ONLY

    def __post_init__(self):
        if not self.power > 0:
            raise ValueError(f"power must be positive, got {self.power}")
        if self.radius_cells < 1:
            raise ValueError(f"radius_cells must be >= 1, got {self.radius_cells}")
        if self.min_neighbors < 1:
            raise ValueError("min_neighbors must be >= 1")
        if self.min_neighbors > self.max_neighbors:
            raise ValueError(
                f"min_neighbors {self.min_neighbors} exceeds "
                f"max_neighbors {self.max_neighbors}"
            )


@lru_cache(maxsize=32)
def _offsets(radius: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(dr, dc, d2) for the Chebyshev box, sorted by (d2, dr, dc), no centre."""
    span = np.arange(-radius, radius + 1)
    dr, dc = np.meshgrid(span, span, indexing="ij")
    dr = dr.ravel()
    dc = dc.ravel()
    keep = (dr != 0) | (dc != 0)
    dr, dc = dr[keep], dc[keep]
    d2 = dr * dr + dc * dc
    order = np.lexsort((dc, dr, d2))
    return dr[order], dc[order], d2[order]


def _box_counts(mask: np.ndarray, radius: int) -> np.ndarray:
    """Count of True cells in the clipped (2r+1)^2 box around each cell."""
    nrows, ncols = mask.shape
    summed = np.zeros((nrows + 1, ncols + 1), dtype=np.int64)
    summed[1:, 1:] = mask.cumsum(axis=0).cumsum(axis=1)
    rows = np.arange(nrows)
    cols = np.arange(ncols)
    i_lo = np.maximum(rows - radius, 0)
    i_hi = np.minimum(rows + radius + 1, nrows)
    j_lo = np.maximum(cols - radius, 0)
    j_hi = np.minimum(cols + radius + 1, ncols)
    return (
        summed[np.ix_(i_hi, j_hi)]
        - summed[np.ix_(i_lo, j_hi)]
        - summed[np.ix_(i_hi, j_lo)]
        + summed[np.ix_(i_lo, j_lo)]
    )


def _accumulate(
    values: np.ndarray,
    mask: np.ndarray,
    rows: np.ndarray,
    cols: np.ndarray,
    params: IdwParams,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """IDW accumulation over the nearest data cells of each candidate.

    Returns (weighted sum, weight sum, neighbour count, neighbour min,
    neighbour max) per candidate. Offsets are visited in ascending distance
    order, so once a candidate has max_neighbors contributions no nearer
    neighbour can exist and it drops out of the scan.
    """
    nrows, ncols = values.shape
    m = rows.shape[0]
    num = np.zeros(m)
    den = np.zeros(m)
    cnt = np.zeros(m, dtype=np.int64)
    vmin = np.full(m, np.inf)
    vmax = np.full(m, -np.inf)
    if m == 0:
        return num, den, cnt, vmin, vmax

    dr_all, dc_all, d2_all = _offsets(params.radius_cells)
    weights = d2_all.astype(np.float64) ** (-0.5 * params.power)
    active = np.arange(m)
    max_nb = params.max_neighbors
    for dr, dc, w in zip(dr_all, dc_all, weights):
        rr = rows[active] + dr
        cc = cols[active] + dc
        ok = (rr >= 0) & (rr < nrows) & (cc >= 0) & (cc < ncols)
        rr = rr[ok]
        cc = cc[ok]
        hit = mask[rr, cc]
        sel = active[ok][hit]
        if sel.size:
            # sel holds unique indices (one neighbour position per candidate)
            v = values[rr[hit], cc[hit]]
            num[sel] += w * v
            den[sel] += w
            cnt[sel] += 1
            vmin[sel] = np.minimum(vmin[sel], v)
            vmax[sel] = np.maximum(vmax[sel], v)
            active = active[cnt[active] < max_nb]
            if active.size == 0:
                break
    return num, den, cnt, vmin, vmax


def idw_fill(wse: Raster, params: IdwParams | None = None) -> Raster:
    """Fill nodata cells that have enough data within the search radius.

    A nodata cell with at least ``min_neighbors`` data cells in the
    Chebyshev box receives the IDW average of its nearest ``max_neighbors``
    data cells (clamped into their value range, so filling is always a
    convex combination). Data cells are never modified; nodata cells with
    no qualifying neighbours stay nodata.
    """
    params = params or IdwParams()
    mask = wse.data_mask
    nodata = wse.nodata
    counts = _box_counts(mask, params.radius_cells)
    cand = ~mask & (counts >= params.min_neighbors)
    out = wse.values.copy()
    if cand.any():
        rows, cols = np.nonzero(cand)
        num, den, cnt, vmin, vmax = _accumulate(wse.values, mask, rows, cols, params)
        good = cnt >= params.min_neighbors
        filled = np.clip(num[good] / den[good], vmin[good], vmax[good])
        out[rows[good], cols[good]] = filled
    return Raster(wse.header, locked(out))


def idw_smooth(wse: Raster, params: IdwParams | None = None) -> Raster:
    """Fill nodata cells, then blend every data cell with its neighbourhood.

    Data cells become 0.5*original + 0.5*idw(neighbours), neighbours taken
    exactly as in :func:`idw_fill` but excluding the cell itself. A data
    cell with no neighbours in range is left unchanged.
    """
    params = params or IdwParams()
    mask = wse.data_mask
    filled = idw_fill(wse, params)
    out = filled.values.copy()
    if mask.any():
        rows, cols = np.nonzero(mask)
        num, den, cnt, vmin, vmax = _accumulate(wse.values, mask, rows, cols, params)
        good = cnt > 0
        neighborhood = np.clip(num[good] / den[good], vmin[good], vmax[good])
        original = wse.values[rows[good], cols[good]]
        out[rows[good], cols[good]] = 0.5 * original + 0.5 * neighborhood
    return Raster(wse.header, locked(out))


def fill_stack(stack: HazardStack, params: IdwParams | None = None) -> HazardStack:
    """Apply the configured IDW pass to every layer of a stack."""
    params = params or IdwParams()
    op = idw_smooth if params.mode is IdwMode.SMOOTH_ALL else idw_fill
    layers = tuple(
        ReturnPeriodLayer(lyr.return_period_years, lyr.kind, op(lyr.grid, params))
        for lyr in stack.layers
    )
    return HazardStack(dem=stack.dem, layers=layers)
