"""Command-line pipeline: fit, plan, evaluate, compare.

Exit codes: 0 success, 1 I/O or parse failure, 2 domain infeasibility
(unfittable model, footprint larger than the region, ...), 3 audit
failure (safety violations found by ``evaluate``).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

from . import coverage_eval, mission_io, planner, sprinkler
from .geodesy import GeodeticCoord, GeoReference, geodetic_to_ned
from .geometry2d import Point2D, erode
from .sprinkler import FitConfig, Paraboloid

DEFAULT_SPEED = 2.0      # m/s, cruise speed used for time estimates
DEFAULT_ALTITUDE = 10.0  # m, relative flight altitude

EXIT_OK = 0
EXIT_IO = 1
EXIT_INFEASIBLE = 2
EXIT_AUDIT = 3


class _CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _parse_pair(text: str, flag: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise _CliError(f"{flag} expects two comma-separated numbers, "
                        f"got {text!r}", EXIT_IO)
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise _CliError(f"{flag} expects numbers, got {text!r}", EXIT_IO)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise _CliError(f"{flag} values must be finite", EXIT_IO)
    return a, b


def _load_region(path):
    region = mission_io.read_region(path)
    for warning in region.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    polygon, ref = mission_io.region_to_local(region)
    return region, polygon, ref


def _point_in_region_frame(text: str, flag: str, region,
                           ref) -> Point2D:
    a, b = _parse_pair(text, flag)
    if region.frame == "geodetic":
        ned = geodetic_to_ned(ref, GeodeticCoord(a, b, ref.origin.altitude))
        return Point2D(ned.east, ned.north)
    return Point2D(a, b)


def _resolve_radius(args) -> float:
    if args.radius is not None:
        if not args.radius > 0:
            raise _CliError("--radius must be positive", EXIT_IO)
        return args.radius
    model = mission_io.read_fit_report(args.model)
    m = Paraboloid(model["curvature_x"], model["curvature_y"],
                   model["altitude"])
    return sprinkler.footprint_radius_from_altitude(m, args.altitude)


def cmd_fit(args) -> int:
    samples = mission_io.read_droplets(args.droplets)
    try:
        result = sprinkler.fit(samples, config=FitConfig())
    except (sprinkler.NotIdentifiable, sprinkler.NonPositiveFit) as exc:
        raise _CliError(f"fit failed: {exc}", EXIT_INFEASIBLE)
    mission_io.write_fit_report(result, args.altitude, args.out,
                                sigma=args.sigma)
    radius = sprinkler.footprint_radius_from_altitude(result.model,
                                                      args.altitude)
    print(f"curvature_x={result.model.curvature_x:.9f}")
    print(f"curvature_y={result.model.curvature_y:.9f}")
    print(f"altitude={result.model.altitude:.9f}")
    print(f"residual_rms={result.residual_rms:.9f}")
    print(f"footprint_radius={radius:.9f}")
    if not result.converged:
        raise _CliError("fit did not converge", EXIT_INFEASIBLE)
    return EXIT_OK


def _plan_from_args(args, region, polygon, ref):
    radius = _resolve_radius(args)
    start = _point_in_region_frame(args.start, "--start", region, ref)
    end = _point_in_region_frame(args.end, "--end", region, ref)
    params = planner.PlanParams(radius, start, end,
                                line_spacing=args.spacing)
    try:
        path = planner.plan_coverage(polygon, params)
    except planner.FootprintTooLarge as exc:
        raise _CliError(str(exc), EXIT_INFEASIBLE)
    except (planner.StartOutside, planner.EndOutside) as exc:
        raise _CliError(str(exc), EXIT_INFEASIBLE)
    return params, path


def _mission_reference(args, region, ref) -> GeoReference:
    if ref is not None:
        return ref
    if args.origin is None:
        raise _CliError("local-frame regions need --origin LAT,LON to "
                        "georeference the mission", EXIT_IO)
    lat, lon = _parse_pair(args.origin, "--origin")
    return GeoReference(GeodeticCoord(lat, lon, 0.0))


def cmd_plan(args) -> int:
    region, polygon, ref = _load_region(args.region)
    params, path = _plan_from_args(args, region, polygon, ref)
    mission_ref = _mission_reference(args, region, ref)
    mission_io.write_mission(path, mission_ref, args.altitude,
                             args.out_mission)
    if args.svg:
        mprime = erode(polygon, params.footprint_radius)
        mission_io.write_svg(polygon, mprime, path, args.svg)
    dx, dy = path.sweep_direction
    print(f"footprint_radius={params.footprint_radius:.6f}")
    print(f"line_spacing={params.line_spacing:.6f}")
    print(f"line_count={path.line_count}")
    print(f"sweep_direction={dx:.6f},{dy:.6f}")
    print(f"path_length={path.total_length:.6f}")
    print(f"waypoints={len(path.waypoints)}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    region, polygon, ref = _load_region(args.region)
    if not args.radius > 0:
        raise _CliError("--radius must be positive", EXIT_IO)
    if args.mission:
        if ref is None:
            raise _CliError("evaluating a mission needs a geodetic region",
                            EXIT_IO)
        mission = mission_io.read_mission(args.mission)
        points = mission_io.mission_waypoints_local(mission, ref)
        if not points:
            raise _CliError("mission has no flight waypoints", EXIT_IO)
        path = planner.path_from_positions(points)
    else:
        path = mission_io.read_path(args.path)
    try:
        mprime = erode(polygon, args.radius)
    except Exception as exc:
        raise _CliError(f"cannot erode region: {exc}", EXIT_INFEASIBLE)
    cell = args.cell if args.cell else args.radius / 50.0
    report = coverage_eval.evaluate(polygon, mprime, path, args.radius,
                                    args.speed, cell,
                                    safety_tol=args.safety_tol)
    mission_io.write_report(report, args.report)
    print(mission_io.format_report(report), end="")
    if report.safety_violations > 0:
        return EXIT_AUDIT
    return EXIT_OK


_COMPARE_COLUMNS = ("planner", "path_length", "est_flight_time",
                    "covered_fraction_M", "covered_fraction_Mprime",
                    "safety_violations", "max_incursion")


def cmd_compare(args) -> int:
    import os

    region, polygon, ref = _load_region(args.region)
    params, proposed = _plan_from_args(args, region, polygon, ref)
    baseline = planner.plan_baseline(polygon, params.line_spacing,
                                     params.start, params.end)
    mprime = erode(polygon, params.footprint_radius)
    cell = args.cell if args.cell else params.footprint_radius / 50.0
    reports = {
        "proposed": coverage_eval.evaluate(polygon, mprime, proposed,
                                           params.footprint_radius,
                                           args.speed, cell),
        "baseline": coverage_eval.evaluate(polygon, mprime, baseline,
                                           params.footprint_radius,
                                           args.speed, cell),
    }
    os.makedirs(args.out_dir, exist_ok=True)
    mission_io.write_svg(polygon, mprime, proposed,
                         os.path.join(args.out_dir, "proposed.svg"),
                         path_color="red")
    mission_io.write_svg(polygon, mprime, baseline,
                         os.path.join(args.out_dir, "baseline.svg"),
                         path_color="blue")
    rows_path = os.path.join(args.out_dir, "rows.csv")
    try:
        with open(rows_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(_COMPARE_COLUMNS)
            for name, rep in reports.items():
                writer.writerow([
                    name, f"{rep.path_length:.6f}",
                    f"{rep.est_flight_time:.6f}",
                    f"{rep.covered_fraction_M:.6f}",
                    f"{rep.covered_fraction_Mprime:.6f}",
                    str(rep.safety_violations), f"{rep.max_incursion:.6f}",
                ])
    except OSError as exc:
        raise _CliError(f"cannot write {rows_path}: {exc}", EXIT_IO)
    ratio = (reports["proposed"].path_length
             / reports["baseline"].path_length)
    table = [
        f"{'planner':<10} {'length_m':>10} {'time_s':>10} {'cov_M':>8} "
        f"{'cov_Mprime':>10} {'violations':>10} {'incursion_m':>11}",
    ]
    for name, rep in reports.items():
        table.append(
            f"{name:<10} {rep.path_length:>10.2f} "
            f"{rep.est_flight_time:>10.2f} {rep.covered_fraction_M:>8.4f} "
            f"{rep.covered_fraction_Mprime:>10.4f} "
            f"{rep.safety_violations:>10d} {rep.max_incursion:>11.6f}")
    table.append(f"length_ratio_proposed_over_baseline={ratio:.6f}")
    report_text = "\n".join(table) + "\n"
    with mission_io._open_out(os.path.join(args.out_dir, "report.txt")) as fh:
        fh.write(report_text)
    print(report_text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sprayplan",
        description="Coverage path planning for spraying drones")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser(
        "fit", help="fit the spray model from droplet observations")
    p_fit.add_argument("--droplets", required=True,
                       help="droplet file, one x,y,z triple (meters) per line")
    p_fit.add_argument("--altitude", type=float, default=DEFAULT_ALTITUDE,
                       help="flight altitude in meters for the derived "
                            "footprint radius (default %(default)s)")
    p_fit.add_argument("--sigma", type=float, default=None,
                       help="known vertical noise level in meters, recorded "
                            "in the report")
    p_fit.add_argument("--out", required=True, help="fit report output file")
    p_fit.set_defaults(func=cmd_fit)

    p_plan = sub.add_parser(
        "plan", help="plan a coverage mission over a region")
    p_plan.add_argument("--region", required=True, help="region file")
    group = p_plan.add_mutually_exclusive_group(required=True)
    group.add_argument("--radius", type=float, default=None,
                       help="footprint radius in meters")
    group.add_argument("--model", default=None,
                       help="fit report file to derive the radius from")
    p_plan.add_argument("--altitude", type=float, default=DEFAULT_ALTITUDE,
                        help="relative flight altitude in meters "
                             "(default %(default)s)")
    p_plan.add_argument("--start", required=True,
                        help="takeoff point: LAT,LON (geodetic region) or "
                             "X,Y meters (local region)")
    p_plan.add_argument("--end", required=True,
                        help="landing point, same format as --start")
    p_plan.add_argument("--spacing", type=float, default=None,
                        help="flight-line spacing in meters "
                             "(default: twice the radius)")
    p_plan.add_argument("--origin", default=None,
                        help="mission origin LAT,LON for local-frame regions")
    p_plan.add_argument("--out-mission", required=True,
                        help="QGC WPL 110 mission output file")
    p_plan.add_argument("--svg", default=None, help="optional figure output")
    p_plan.set_defaults(func=cmd_plan)

    p_eval = sub.add_parser(
        "evaluate", help="evaluate coverage and safety of a mission or path")
    p_eval.add_argument("--region", required=True, help="region file")
    group = p_eval.add_mutually_exclusive_group(required=True)
    group.add_argument("--mission", default=None,
                       help="QGC WPL 110 mission file")
    group.add_argument("--path", default=None,
                       help="local path file, one x,y (meters) per line")
    p_eval.add_argument("--radius", type=float, required=True,
                        help="footprint radius in meters")
    p_eval.add_argument("--speed", type=float, default=DEFAULT_SPEED,
                        help="cruise speed in m/s (default %(default)s)")
    p_eval.add_argument("--cell", type=float, default=None,
                        help="raster cell size in meters "
                             "(default: radius / 50)")
    p_eval.add_argument("--safety-tol", type=float, default=2e-3,
                        help="safety audit tolerance in meters; the default "
                             "absorbs the ~1 mm quantization of 8-decimal "
                             "mission coordinates (default %(default)s)")
    p_eval.add_argument("--report", required=True,
                        help="evaluation report output file")
    p_eval.set_defaults(func=cmd_evaluate)

    p_cmp = sub.add_parser(
        "compare", help="compare the safe planner against the baseline")
    p_cmp.add_argument("--region", required=True, help="region file")
    group = p_cmp.add_mutually_exclusive_group(required=True)
    group.add_argument("--radius", type=float, default=None,
                       help="footprint radius in meters")
    group.add_argument("--model", default=None,
                       help="fit report file to derive the radius from")
    p_cmp.add_argument("--altitude", type=float, default=DEFAULT_ALTITUDE,
                       help="flight altitude in meters used with --model "
                            "(default %(default)s)")
    p_cmp.add_argument("--start", required=True,
                       help="takeoff point: LAT,LON or X,Y meters")
    p_cmp.add_argument("--end", required=True,
                       help="landing point, same format as --start")
    p_cmp.add_argument("--spacing", type=float, default=None,
                       help="flight-line spacing in meters "
                            "(default: twice the radius)")
    p_cmp.add_argument("--speed", type=float, default=DEFAULT_SPEED,
                       help="cruise speed in m/s (default %(default)s)")
    p_cmp.add_argument("--cell", type=float, default=None,
                       help="raster cell size in meters (default: radius/50)")
    p_cmp.add_argument("--out-dir", required=True,
                       help="output directory for reports and figures")
    p_cmp.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (mission_io.ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
