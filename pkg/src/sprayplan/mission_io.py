"""File formats: regions, droplets, waypoint missions, reports, figures.

All formats are plain UTF-8 text with LF line endings and deterministic
byte output for identical inputs.

Region file::

    # comment
    frame: geodetic          (or: local)
    home: 19.467468,-99.193345,2240.0    (optional)
    19.467500,-99.193400
    ...

Geodetic point lines are ``lat,lon[,alt]``; local lines are ``x,y`` in
meters. Droplet files hold one ``x,y,z`` triple per line. Missions use
the tab-separated ``QGC WPL 110`` waypoint format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .coverage_eval import EvalReport
from .geodesy import GeodeticCoord, GeoReference, NedCoord, geodetic_to_ned, \
    ned_to_geodetic
from .geometry2d import ConvexPolygon, Point2D, validate_convex
from .planner import (
    ROLE_CONNECTION,
    ROLE_LANDING,
    ROLE_SWEEP,
    ROLE_TAKEOFF,
    ROLE_TOUR,
    CoveragePath,
    path_from_positions,
)
from .sprinkler import DropletSample, FitResult, footprint_radius_from_altitude

MISSION_HEADER = "QGC WPL 110"
CMD_WAYPOINT = 16
CMD_LAND = 21
CMD_TAKEOFF = 22
FRAME_GLOBAL = 0
FRAME_RELATIVE = 3


class ParseError(ValueError):
    def __init__(self, message: str, path=None, line: int | None = None):
        where = f"{path}:{line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
        self.path = path
        self.line = line


class FrameMissing(ParseError):
    """Region file did not declare its coordinate frame."""


class TooFewPoints(ParseError):
    """Region file holds fewer than three points."""


class WriteError(OSError):
    """Output file could not be written."""


@dataclass
class RegionFile:
    frame: str                       # "geodetic" or "local"
    points: list                     # GeodeticCoord or Point2D
    home: object                     # same type as points
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class MissionItem:
    seq: int
    current: int
    frame: int
    command: int
    p1: float
    p2: float
    p3: float
    p4: float
    latitude: float
    longitude: float
    altitude: float
    autocontinue: int


@dataclass(frozen=True)
class MissionFile:
    items: tuple[MissionItem, ...]


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_floats(line: str, n_min: int, n_max: int, path, lineno: int):
    parts = [p for p in line.replace(",", " ").split() if p]
    if not n_min <= len(parts) <= n_max:
        raise ParseError(f"expected {n_min}..{n_max} values, got {len(parts)}",
                         path, lineno)
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise ParseError(f"not a number: {exc}", path, lineno) from None
    if not all(map(math.isfinite, values)):
        raise ParseError("non-finite value", path, lineno)
    return values


def _parse_geodetic(line: str, path, lineno: int) -> GeodeticCoord:
    values = _parse_floats(line, 2, 3, path, lineno)
    try:
        return GeodeticCoord(*values)
    except ValueError as exc:
        raise ParseError(str(exc), path, lineno) from None


def _parse_local(line: str, path, lineno: int) -> Point2D:
    values = _parse_floats(line, 2, 2, path, lineno)
    return Point2D(values[0], values[1])


def read_region(path) -> RegionFile:
    """Parse a region file; see the module docstring for the format."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    frame = None
    home = None
    points = []
    warnings = []
    for lineno, line in _data_lines(text):
        key, sep, rest = line.partition(":")
        if sep and key.strip().lower() in ("frame", "home"):
            key = key.strip().lower()
            rest = rest.strip()
            if key == "frame":
                if rest not in ("geodetic", "local"):
                    raise ParseError(f"unknown frame {rest!r}", path, lineno)
                frame = rest
            else:
                if frame is None:
                    raise FrameMissing("home line before frame declaration",
                                       path, lineno)
                home = (_parse_geodetic if frame == "geodetic"
                        else _parse_local)(rest, path, lineno)
            continue
        if frame is None:
            raise FrameMissing("frame must be declared before points",
                               path, lineno)
        points.append((_parse_geodetic if frame == "geodetic"
                       else _parse_local)(line, path, lineno))
    if frame is None:
        raise FrameMissing("no frame declaration found", path)
    if len(points) < 3:
        raise TooFewPoints(f"need at least 3 region points, got {len(points)}",
                           path)
    if home is None:
        home = points[0]
        warnings.append("home omitted; defaulting to the first region point")
    return RegionFile(frame, points, home, warnings)


def read_droplets(path) -> list[DropletSample]:
    """Parse droplet observations, one x,y,z triple per line."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    samples = []
    for lineno, line in _data_lines(text):
        x, y, z = _parse_floats(line, 3, 3, path, lineno)
        samples.append(DropletSample(x, y, z))
    if not samples:
        raise ParseError("no droplet rows found", path)
    return samples


def read_path(path) -> CoveragePath:
    """Parse a local-frame path file: one ``x,y`` waypoint per line."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    points = [_parse_local(line, path, lineno)
              for lineno, line in _data_lines(text)]
    if not points:
        raise ParseError("no waypoints found", path)
    return path_from_positions(points)


def region_to_local(region: RegionFile) -> tuple[ConvexPolygon, GeoReference | None]:
    """Region polygon in planar coordinates (x = east, y = north).

    Geodetic regions are converted into the NED frame anchored at the
    region home; local regions pass through with no reference.
    """
    if region.frame == "local":
        return validate_convex(list(region.points)), None
    ref = GeoReference(region.home)
    pts = []
    for g in region.points:
        ned = geodetic_to_ned(ref, g)
        pts.append(Point2D(ned.east, ned.north))
    return validate_convex(pts), ref


def _open_out(path):
    try:
        return open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise WriteError(f"cannot write {path}: {exc}") from exc


def write_mission(path: CoveragePath, ref: GeoReference, altitude: float,
                  out_path) -> MissionFile:
    """Write the path as a ``QGC WPL 110`` mission file.

    Item 0 is the home position (reference origin, absolute frame),
    item 1 a takeoff command at the first waypoint, then one waypoint
    item per path vertex at the relative flight altitude; the final
    vertex becomes a land command.
    """
    if not path.waypoints:
        raise ValueError("cannot write an empty mission")
    items = [MissionItem(0, 1, FRAME_GLOBAL, CMD_WAYPOINT, 0.0, 0.0, 0.0, 0.0,
                         ref.origin.latitude, ref.origin.longitude,
                         ref.origin.altitude, 1)]
    positions = path.positions()
    first = ned_to_geodetic(ref, NedCoord(positions[0].y, positions[0].x, 0.0))
    items.append(MissionItem(1, 0, FRAME_RELATIVE, CMD_TAKEOFF,
                             0.0, 0.0, 0.0, 0.0,
                             first.latitude, first.longitude, altitude, 1))
    for i, p in enumerate(positions):
        g = ned_to_geodetic(ref, NedCoord(p.y, p.x, 0.0))
        last = i == len(positions) - 1
        items.append(MissionItem(
            2 + i, 0, FRAME_RELATIVE, CMD_LAND if last else CMD_WAYPOINT,
            0.0, 0.0, 0.0, 0.0, g.latitude, g.longitude,
            0.0 if last else altitude, 1))
    mission = MissionFile(tuple(items))
    with _open_out(out_path) as fh:
        fh.write(MISSION_HEADER + "\n")
        for it in mission.items:
            fh.write(f"{it.seq}\t{it.current}\t{it.frame}\t{it.command}\t"
                     f"{it.p1:.6f}\t{it.p2:.6f}\t{it.p3:.6f}\t{it.p4:.6f}\t"
                     f"{it.latitude:.8f}\t{it.longitude:.8f}\t"
                     f"{it.altitude:.6f}\t{it.autocontinue}\n")
    return mission


def read_mission(path) -> MissionFile:
    """Parse a ``QGC WPL 110`` mission file."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("QGC WPL"):
        raise ParseError("missing QGC WPL header", path, 1)
    items = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        fields = raw.split("\t")
        if len(fields) != 12:
            raise ParseError(f"expected 12 tab-separated fields, got "
                             f"{len(fields)}", path, lineno)
        try:
            items.append(MissionItem(
                int(fields[0]), int(fields[1]), int(fields[2]),
                int(fields[3]), float(fields[4]), float(fields[5]),
                float(fields[6]), float(fields[7]), float(fields[8]),
                float(fields[9]), float(fields[10]), int(fields[11])))
        except ValueError as exc:
            raise ParseError(f"bad field: {exc}", path, lineno) from None
    for i, it in enumerate(items):
        if it.seq != i:
            raise ParseError(f"non-contiguous sequence index {it.seq}", path)
    if not items:
        raise ParseError("mission has no items", path)
    return MissionFile(tuple(items))


def mission_waypoints_local(mission: MissionFile,
                            ref: GeoReference) -> list[Point2D]:
    """Planar waypoints of the mission's flight items (x = east, y = north).

    Home and takeoff items are skipped; waypoint altitudes are relative,
    so each item is projected at the origin altitude.
    """
    pts = []
    for it in mission.items[2:]:
        if it.command not in (CMD_WAYPOINT, CMD_LAND):
            continue
        g = GeodeticCoord(it.latitude, it.longitude, ref.origin.altitude)
        ned = geodetic_to_ned(ref, g)
        pts.append(Point2D(ned.east, ned.north))
    return pts


_REPORT_FIELDS = (
    ("covered_fraction_M", "{:.6f}"),
    ("covered_fraction_Mprime", "{:.6f}"),
    ("path_length", "{:.6f}"),
    ("est_flight_time", "{:.6f}"),
    ("safety_violations", "{:d}"),
    ("max_incursion", "{:.6f}"),
)


def format_report(r: EvalReport) -> str:
    return "".join(f"{name}={fmt.format(getattr(r, name))}\n"
                   for name, fmt in _REPORT_FIELDS)


def write_report(r: EvalReport, out_path) -> None:
    """Emit the evaluation metrics as deterministic key=value lines."""
    with _open_out(out_path) as fh:
        fh.write(format_report(r))


def write_fit_report(result: FitResult, radius_altitude: float, out_path,
                     sigma: float | None = None) -> None:
    """Fitted model parameters plus the derived footprint radius.

    Values carry 9 decimals so the file can be read back as a model
    without losing planning precision.
    """
    m = result.model
    lines = [
        f"curvature_x={m.curvature_x:.9f}",
        f"curvature_y={m.curvature_y:.9f}",
        f"altitude={m.altitude:.9f}",
        f"residual_rms={result.residual_rms:.9f}",
        f"iterations={result.iterations}",
        f"converged={int(result.converged)}",
        f"radius_altitude={radius_altitude:.9f}",
        f"footprint_radius="
        f"{footprint_radius_from_altitude(m, radius_altitude):.9f}",
    ]
    if sigma is not None:
        lines.append(f"noise_sigma={sigma:.9f}")
    with _open_out(out_path) as fh:
        fh.write("\n".join(lines) + "\n")


def read_fit_report(path) -> dict[str, float]:
    """Read back a fit report as a key -> value mapping."""
    out: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    for lineno, line in _data_lines(text):
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError("expected key=value", path, lineno)
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise ParseError(f"bad value for {key!r}", path, lineno) from None
    for required in ("curvature_x", "curvature_y", "altitude"):
        if required not in out:
            raise ParseError(f"missing {required}", path)
    return out


# ---------------------------------------------------------------------------
# SVG figure

_SVG_STROKES = {
    ROLE_TAKEOFF: ("transit", "#888888", "4,3"),
    ROLE_LANDING: ("transit", "#888888", "4,3"),
    ROLE_SWEEP: ("sweep", None, None),        # path color
    ROLE_CONNECTION: ("connection", "#e07000", None),
    ROLE_TOUR: ("corner-tour", "#009040", None),
}


def _svg_polyline_runs(path: CoveragePath):
    """Split the path into per-role segment runs for styling."""
    runs = []
    wps = path.waypoints
    for i in range(1, len(wps)):
        role = wps[i].role
        a, b = wps[i - 1].position, wps[i].position
        if runs and runs[-1][0] == role:
            runs[-1][1].append(b)
        else:
            runs.append((role, [a, b]))
    return runs


def write_svg(M: ConvexPolygon, Mprime: ConvexPolygon, path: CoveragePath,
              out_path, path_color: str = "red") -> None:
    """Standalone SVG: region in blue, eroded region in red, path strokes
    per segment role, start/end markers. Deterministic byte output."""
    xs = [v.x for v in M.vertices]
    ys = [v.y for v in M.vertices]
    for w in path.waypoints:
        xs.append(w.position.x)
        ys.append(w.position.y)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    margin = 0.05 * max(x1 - x0, y1 - y0, 1.0)
    x0, x1 = x0 - margin, x1 + margin
    y0, y1 = y0 - margin, y1 + margin
    ysum = y0 + y1  # svg y grows downward: map y -> ysum - y

    def pt(p: Point2D) -> str:
        return f"{p.x:.4f},{ysum - p.y:.4f}"

    sw = 0.006 * max(x1 - x0, y1 - y0)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{x0:.4f} {y0:.4f} {x1 - x0:.4f} {y1 - y0:.4f}">',
        f'  <g id="region"><polygon fill="none" stroke="blue" '
        f'stroke-width="{sw:.4f}" points="'
        + " ".join(pt(v) for v in M.vertices) + '"/></g>',
        f'  <g id="eroded"><polygon fill="none" stroke="red" '
        f'stroke-width="{sw:.4f}" stroke-dasharray="{2 * sw:.4f},{sw:.4f}" '
        f'points="' + " ".join(pt(v) for v in Mprime.vertices) + '"/></g>',
    ]
    groups: dict[str, list[str]] = {}
    for role, pts in _svg_polyline_runs(path):
        name, color, dash = _SVG_STROKES[role]
        color = color or path_color
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        groups.setdefault(name, []).append(
            f'    <polyline fill="none" stroke="{color}" '
            f'stroke-width="{sw:.4f}"{dash_attr} points="'
            + " ".join(pt(p) for p in pts) + '"/>')
    for name in ("sweep", "connection", "corner-tour", "transit"):
        if name in groups:
            out.append(f'  <g id="{name}">')
            out.extend(groups[name])
            out.append('  </g>')
    if path.waypoints:
        s = path.waypoints[0].position
        e = path.waypoints[-1].position
        out.append(f'  <circle id="start" cx="{s.x:.4f}" '
                   f'cy="{ysum - s.y:.4f}" r="{2 * sw:.4f}" fill="green"/>')
        out.append(f'  <circle id="end" cx="{e.x:.4f}" '
                   f'cy="{ysum - e.y:.4f}" r="{2 * sw:.4f}" fill="black"/>')
    out.append('</svg>')
    with _open_out(out_path) as fh:
        fh.write("\n".join(out) + "\n")
