"""Input bundle assembly: return-period layers, depth-to-WSE conversion.

A hazard stack is one DEM plus two or more flood surfaces, each tagged with
its return period T in years (annual exceedance probability p = 1/T). Depth
grids are converted to water surface elevation by adding the DEM; layers
already expressed as WSE pass through unchanged.

Units (feet or metres) are the caller's responsibility and must be uniform
across all inputs; no conversion is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import AlignmentError, StackError
from .raster import Raster, grids_aligned, locked


class LayerKind(Enum):
    DEPTH = "depth"
    WSE = "wse"


@dataclass(frozen=True)
class ReturnPeriodLayer:
    """One flood surface (depth or WSE grid) tagged with its return period."""

    return_period_years: float
    kind: LayerKind
    grid: Raster

    def __post_init__(self):
        if not self.return_period_years > 1:
            raise StackError(
                f"return period must exceed 1 year, got {self.return_period_years}"
            )

    @property
    def exceedance_probability(self) -> float:
        """Annual exceedance probability, always derived as 1/T."""
        return 1.0 / self.return_period_years


@dataclass(frozen=True)
class HazardStack:
    """Validated bundle: DEM plus >= 2 WSE layers sorted by ascending T."""

    dem: Raster
    layers: tuple[ReturnPeriodLayer, ...] = field(default=())

    def __post_init__(self):
        if len(self.layers) < 2:
            raise StackError("at least two return periods required")
        periods = [lyr.return_period_years for lyr in self.layers]
        if any(b <= a for a, b in zip(periods, periods[1:])):
            raise StackError(f"layers must be strictly increasing in T, got {periods}")
        for lyr in self.layers:
            if not grids_aligned(self.dem.header, lyr.grid.header):
                raise AlignmentError(
                    f"layer T={lyr.return_period_years:g} grid is not aligned "
                    f"with the DEM"
                )

    @property
    def periods(self) -> tuple[float, ...]:
        return tuple(lyr.return_period_years for lyr in self.layers)

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(lyr.exceedance_probability for lyr in self.layers)


def build_wse(dem: Raster, layer: ReturnPeriodLayer) -> Raster:
    """Convert one layer to water surface elevation.

    Depth grids become dem + depth where both cells hold data and depth is
    positive; zero or negative depths carry no flood surface information and
    map to nodata, as do cells where either input is nodata. WSE grids pass
    through unchanged.
    """
    if not grids_aligned(dem.header, layer.grid.header):
        raise AlignmentError(
            f"layer T={layer.return_period_years:g} grid is not aligned with the DEM"
        )
    if layer.kind is LayerKind.WSE:
        return layer.grid
    depth = layer.grid.values
    nodata = layer.grid.nodata
    ok = (depth != nodata) & (depth > 0) & dem.data_mask
    out = np.full(depth.shape, nodata)
    out[ok] = dem.values[ok] + depth[ok]
    return Raster(layer.grid.header, locked(out))


def validate_stack(dem: Raster, layers: list[ReturnPeriodLayer]) -> HazardStack:
    """Sort, validate and convert layers into a HazardStack.

    Raises StackError for fewer than two layers or duplicate return periods,
    AlignmentError naming the layer whose grid does not match the DEM.
    """
    if len(layers) < 2:
        raise StackError("at least two return periods required")
    seen: set[float] = set()
    for lyr in layers:
        t = lyr.return_period_years
        if t in seen:
            raise StackError(f"duplicate return period T={t:g}")
        seen.add(t)
    ordered = sorted(layers, key=lambda lyr: lyr.return_period_years)
    converted = tuple(
        ReturnPeriodLayer(lyr.return_period_years, LayerKind.WSE, build_wse(dem, lyr))
        for lyr in ordered
    )
    return HazardStack(dem=dem, layers=converted)
