"""IDW fill/smooth against a brute-force re-implementation and the
documented hand-computed cases."""

import numpy as np
import pytest

from flopit import IdwMode, IdwParams, idw_fill, idw_smooth

from conftest import make_raster

NODATA = -9999.0


def brute_neighbors(values, mask, row, col, params):
    """All data cells in the Chebyshev box, nearest max_neighbors first.

    Mirrors the documented selection rule: ascending Euclidean distance,
    ties broken by (row offset, column offset).
    """
    nrows, ncols = values.shape
    found = []
    rad = params.radius_cells
    for dr in range(-rad, rad + 1):
        for dc in range(-rad, rad + 1):
            if dr == 0 and dc == 0:
                continue
            rr, cc = row + dr, col + dc
            if 0 <= rr < nrows and 0 <= cc < ncols and mask[rr, cc]:
                found.append((dr * dr + dc * dc, dr, dc, values[rr, cc]))
    found.sort(key=lambda t: t[:3])
    return found[: params.max_neighbors]


def brute_idw(values, mask, row, col, params):
    neigh = brute_neighbors(values, mask, row, col, params)
    if not neigh:
        return None
    num = den = 0.0
    for d2, _, _, v in neigh:
        w = float(d2) ** (-0.5 * params.power)
        num += w * v
        den += w
    vals = [v for *_, v in neigh]
    return min(max(num / den, min(vals)), max(vals)), len(neigh)


def test_constant_hole_filled():
    vals = np.full((5, 5), 5.0)
    vals[2, 2] = NODATA
    out = idw_fill(make_raster(vals), IdwParams())
    assert out.values[2, 2] == 5.0


def test_two_equidistant_neighbors():
    vals = np.full((1, 3), NODATA)
    vals[0, 0], vals[0, 2] = 0.0, 10.0
    out = idw_fill(make_raster(vals), IdwParams())
    assert out.values[0, 1] == pytest.approx(5.0, abs=1e-12)


def test_weighted_pair():
    # hole with value 0 at distance 1 and value 10 at distance 2, power 2:
    # (0*1 + 10*0.25) / 1.25 = 2.0
    vals = np.array([[0.0, NODATA, NODATA, 10.0, NODATA]])
    out = idw_fill(make_raster(vals), IdwParams())
    assert out.values[0, 1] == pytest.approx(2.0, abs=1e-12)


def test_fill_only_keeps_data_cells(rng):
    vals = rng.uniform(0, 10, (8, 8))
    vals[rng.random((8, 8)) < 0.4] = NODATA
    r = make_raster(vals)
    out = idw_fill(r, IdwParams())
    mask = r.data_mask
    assert (out.values[mask] == r.values[mask]).all()


def test_unreachable_hole_stays_nodata():
    vals = np.full((9, 9), NODATA)
    vals[0, 0] = 3.0
    out = idw_fill(make_raster(vals), IdwParams(radius_cells=2))
    assert out.values[8, 8] == NODATA
    assert out.values[1, 1] == 3.0


def test_min_neighbors_threshold():
    vals = np.full((1, 4), NODATA)
    vals[0, 0] = 2.0
    out = idw_fill(make_raster(vals), IdwParams(min_neighbors=2, radius_cells=3))
    assert (out.values[0, 1:] == NODATA).all()


def test_smooth_checkerboard_blend():
    # centre 0 with four 4-neighbours of 10 (w=1) and four diagonal 0s
    # (w=0.5): idw = 40/6, blended = 0.5*0 + 0.5*40/6 = 10/3
    vals = np.zeros((3, 3))
    vals[0, 1] = vals[1, 0] = vals[1, 2] = vals[2, 1] = 10.0
    out = idw_smooth(make_raster(vals), IdwParams(radius_cells=1))
    assert out.values[1, 1] == pytest.approx(10.0 / 3.0, rel=1e-12)


def test_smooth_constant_field_unchanged():
    vals = np.full((6, 6), 4.25)
    out = idw_smooth(make_raster(vals), IdwParams())
    assert (out.values == 4.25).all()


def test_smooth_isolated_cell_unchanged():
    vals = np.full((7, 7), NODATA)
    vals[3, 3] = 8.0
    out = idw_smooth(make_raster(vals), IdwParams(radius_cells=2))
    assert out.values[3, 3] == 8.0


@pytest.mark.parametrize("op", [idw_fill, idw_smooth])
def test_matches_brute_force(op, rng):
    params = IdwParams(power=1.7, radius_cells=3, max_neighbors=5)
    for _ in range(8):
        vals = rng.uniform(-5, 20, (10, 10))
        vals[rng.random((10, 10)) < 0.5] = NODATA
        r = make_raster(vals)
        mask = r.data_mask
        out = op(r, params)
        for row in range(10):
            for col in range(10):
                got = out.values[row, col]
                res = brute_idw(vals, mask, row, col, params)
                if mask[row, col]:
                    if op is idw_fill:
                        expected = vals[row, col]
                    else:
                        expected = (
                            vals[row, col]
                            if res is None
                            else 0.5 * vals[row, col] + 0.5 * res[0]
                        )
                elif res is None:
                    expected = NODATA
                else:
                    expected = res[0]
                assert got == pytest.approx(expected, rel=1e-12, abs=1e-12), (row, col)


def test_repeated_runs_identical(rng):
    vals = rng.uniform(0, 9, (9, 9))
    vals[rng.random((9, 9)) < 0.4] = NODATA
    r = make_raster(vals)
    out1 = idw_fill(r, IdwParams())
    out2 = idw_fill(r, IdwParams())
    assert out1.values.tobytes() == out2.values.tobytes()


def test_params_validation():
    with pytest.raises(ValueError):
        IdwParams(power=0)
    with pytest.raises(ValueError):
        IdwParams(radius_cells=0)
    with pytest.raises(ValueError):
        IdwParams(min_neighbors=5, max_neighbors=4)
    assert IdwParams().mode is IdwMode.FILL_ONLY
