"""Command-line interface: interpolate, compare, synth.

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 I/O
error. Diagnostics and progress go to stderr; statistics and summaries go
to stdout, so pipelines can consume them.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass

from .curves import InterpolationMethod
from .errors import FlopitError
from .hazard import LayerKind, ReturnPeriodLayer, validate_stack
from .idw import IdwMode, IdwParams, fill_stack
from .probability import derive_zones, interpolate_map
from .raster import grids_aligned, read_ascii_grid, write_ascii_grid
from .synth import FixtureShape, FixtureSpec, write_fixture
from .zonestats import compare_zones, write_stats_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

_METHODS = {
    "spline": InterpolationMethod.MONOTONE_CUBIC,
    "loglinear": InterpolationMethod.LOG_LINEAR,
}


@dataclass(frozen=True)
class LayerSpec:
    return_period_years: float
    kind: LayerKind
    path: str


@dataclass(frozen=True)
class RunConfig:
    """Everything one interpolation run needs."""

    dem_path: str
    layers: tuple[LayerSpec, ...]
    method: InterpolationMethod
    idw: IdwParams
    out_prefix: str
    workers: int
    decimals: int


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; we use 1
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_layer(text: str) -> LayerSpec:
    parts = text.split(":", 2)
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"layer spec {text!r} must be T:KIND:PATH (e.g. 100:wse:w100.asc)"
        )
    t_text, kind_text, path = parts
    try:
        t_years = float(t_text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad return period {t_text!r}") from None
    kind_text = kind_text.lower()
    if kind_text not in ("depth", "wse"):
        raise argparse.ArgumentTypeError(
            f"layer kind must be 'depth' or 'wse', got {kind_text!r}"
        )
    return LayerSpec(t_years, LayerKind(kind_text), path)


def _parse_level(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"level spec {text!r} must be T:WSE")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad level spec {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flopit", description=__doc__)
    parser.add_argument(
        "--log-level",
        default="info",
        choices=["debug", "info", "warning", "error"],
        help="verbosity of diagnostics on stderr",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_int = sub.add_parser(
        "interpolate",
        help="interpolate a continuous flood probability map",
    )
    p_int.add_argument("--dem", required=True, help="DEM raster (ESRI ASCII grid)")
    p_int.add_argument(
        "--layer",
        action="append",
        default=[],
        type=_parse_layer,
        metavar="T:KIND:PATH",
        help="flood layer: return period, 'depth' or 'wse', raster path; repeatable",
    )
    p_int.add_argument("--method", default="spline", choices=sorted(_METHODS))
    p_int.add_argument("--out", required=True, help="output path prefix")
    p_int.add_argument("--idw-power", type=float, default=2.0)
    p_int.add_argument("--idw-radius", type=int, default=10, metavar="CELLS")
    p_int.add_argument("--idw-max-neighbors", type=int, default=16)
    p_int.add_argument("--idw-min-neighbors", type=int, default=1)
    p_int.add_argument("--idw-mode", default="fill", choices=["fill", "smooth"])
    p_int.add_argument("--workers", type=int, default=1, help="threads; 0 = one per CPU")
    p_int.add_argument("--decimals", type=int, default=6, help="output decimal places")

    p_cmp = sub.add_parser("compare", help="per-zone statistics of a probability map")
    p_cmp.add_argument("--prob", required=True, help="probability raster")
    p_cmp.add_argument("--zones", required=True, help="zone raster")
    p_cmp.add_argument("--out", required=True, help="output CSV path")

    p_syn = sub.add_parser("synth", help="write a synthetic terrain fixture")
    p_syn.add_argument(
        "--shape", default="ramp", choices=[s.value for s in FixtureShape]
    )
    p_syn.add_argument("--out", required=True, help="output directory")
    p_syn.add_argument("--ncols", type=int, default=50)
    p_syn.add_argument("--nrows", type=int, default=40)
    p_syn.add_argument("--slope", type=float, default=0.5)
    p_syn.add_argument("--seed", type=int, default=0)
    p_syn.add_argument(
        "--level",
        action="append",
        default=[],
        type=_parse_level,
        metavar="T:WSE",
        help="return period and constant surface elevation; repeatable",
    )
    return parser


def cmd_interpolate(config: RunConfig) -> int:
    dem = read_ascii_grid(config.dem_path)
    layers = []
    for spec in config.layers:
        grid = read_ascii_grid(spec.path)
        if not grids_aligned(dem.header, grid.header):
            raise FlopitError(f"layer {spec.path} is not aligned with the DEM")
        layers.append(ReturnPeriodLayer(spec.return_period_years, spec.kind, grid))

    stack = validate_stack(dem, layers)
    logger.info("stack validated: %d layers, %dx%d cells",
                len(stack.layers), dem.header.nrows, dem.header.ncols)
    filled = fill_stack(stack, config.idw)

    t0 = time.perf_counter()
    pm = interpolate_map(filled, None, config.method, workers=config.workers)
    elapsed = time.perf_counter() - t0
    zones = derive_zones(filled)

    n_cells = dem.header.nrows * dem.header.ncols
    interior, high, low = pm.clamp_counts()
    n_data = interior + high + low
    rate = n_cells / elapsed if elapsed > 0 else float("inf")
    logger.info("interpolated %d cells in %.3f s (%.0f cells/s)", n_cells, elapsed, rate)

    prefix = config.out_prefix
    write_ascii_grid(pm.probability, f"{prefix}_prob.asc", config.decimals)
    write_ascii_grid(pm.return_period, f"{prefix}_rp.asc", config.decimals)
    write_ascii_grid(pm.clamp_flags, f"{prefix}_clamp.asc", 0)
    write_ascii_grid(zones.zones, f"{prefix}_zones.asc", config.decimals)

    print(f"cells_total {n_cells}")
    print(f"cells_with_probability {n_data}")
    print(f"cells_interpolated {interior}")
    print(f"cells_clamped_high {high}")
    print(f"cells_clamped_low {low}")
    print(f"cells_nodata {n_cells - n_data}")
    print(f"cells_per_second {rate:.0f}")
    return EXIT_OK


def cmd_compare(prob_path: str, zones_path: str, out_csv: str) -> int:
    prob = read_ascii_grid(prob_path)
    zones = read_ascii_grid(zones_path)
    stats = compare_zones(prob, zones)
    if not stats:
        raise FlopitError("no cells in any zone")
    write_stats_csv(stats, out_csv)
    for s in stats:
        print(f"zone_T {s.zone_T:g} mean_return_period {s.mean:.6f}")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    levels = tuple(args.level) or ((10.0, 5.0), (100.0, 7.0), (500.0, 8.0))
    try:
        spec = FixtureSpec(
            shape=FixtureShape(args.shape),
            ncols=args.ncols,
            nrows=args.nrows,
            slope=args.slope,
            wse_levels=levels,
            seed=args.seed,
        )
    except ValueError as exc:
        raise FlopitError(str(exc)) from None
    manifest = write_fixture(spec, args.out)
    print(f"wrote {len(manifest['layers']) + 1} rasters to {args.out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    try:
        if args.command == "interpolate":
            try:
                idw = IdwParams(
                    power=args.idw_power,
                    radius_cells=args.idw_radius,
                    max_neighbors=args.idw_max_neighbors,
                    min_neighbors=args.idw_min_neighbors,
                    mode=IdwMode(args.idw_mode),
                )
            except ValueError as exc:
                raise FlopitError(str(exc)) from None
            config = RunConfig(
                dem_path=args.dem,
                layers=tuple(args.layer),
                method=_METHODS[args.method],
                idw=idw,
                out_prefix=args.out,
                workers=args.workers,
                decimals=args.decimals,
            )
            return cmd_interpolate(config)
        if args.command == "compare":
            return cmd_compare(args.prob, args.zones, args.out)
        if args.command == "synth":
            return cmd_synth(args)
        parser.error(f"unknown command {args.command!r}")
        return EXIT_USAGE
    except FlopitError as exc:
        print(f"flopit: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"flopit: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
