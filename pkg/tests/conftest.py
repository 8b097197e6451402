import numpy as np
import pytest

from flopit import GridHeader, Raster


def make_raster(values, nodata=-9999.0, cellsize=1.0, xll=0.0, yll=0.0):
    """Raster from a nested list / array, nodata encoded as the sentinel."""
    arr = np.asarray(values, dtype=np.float64)
    hdr = GridHeader(
        ncols=arr.shape[1],
        nrows=arr.shape[0],
        xllcorner=xll,
        yllcorner=yll,
        cellsize=cellsize,
        nodata_value=nodata,
    )
    return Raster(hdr, arr)


@pytest.fixture
def rng():
    return np.random.default_rng(17)
