"""Back-and-forth coverage routes over convex regions.

``plan_coverage`` runs the full pipeline: line spacing = twice the
footprint radius, safety erosion of the region, a sweep-direction
search over the eroded polygon's edge orientations (an optimal sweep
direction for a convex polygon is parallel to some edge), boundary-safe
connections between flight lines, and a closing perimeter tour that
picks up the areas the parallel sweep misses. ``plan_baseline`` is the
uneroded comparison planner whose perpendicular connections may leave
the region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry2d import (
    DEFAULT_TOL,
    ConvexPolygon,
    EmptyErosion,
    Point2D,
    contains,
    distance,
    erode,
)

ROLE_TAKEOFF = "takeoff-transit"
ROLE_SWEEP = "sweep"
ROLE_CONNECTION = "boundary-connection"
ROLE_TOUR = "corner-tour"
ROLE_LANDING = "landing-transit"

WAYPOINT_ROLES = frozenset(
    {ROLE_TAKEOFF, ROLE_SWEEP, ROLE_CONNECTION, ROLE_TOUR, ROLE_LANDING})


class FootprintTooLarge(ValueError):
    """Erosion by the footprint radius leaves no interior region."""


class StartOutside(ValueError):
    """Start point is not inside the safe (eroded) region."""


class EndOutside(ValueError):
    """End point is not inside the safe (eroded) region."""


@dataclass(frozen=True)
class PlanParams:
    """Planning inputs; line spacing defaults to 2 * footprint_radius."""

    footprint_radius: float
    start: Point2D
    end: Point2D
    line_spacing: float | None = None

    def __post_init__(self):
        if not self.footprint_radius > 0:
            raise ValueError("footprint_radius must be positive")
        if self.line_spacing is None:
            object.__setattr__(self, "line_spacing",
                               2.0 * self.footprint_radius)
        if not self.line_spacing > 0:
            raise ValueError("line_spacing must be positive")


@dataclass(frozen=True)
class Waypoint:
    """A path vertex tagged with the phase of the segment arriving at it.

    The first waypoint (no incoming segment) carries the takeoff role.
    """

    position: Point2D
    role: str

    def __post_init__(self):
        if self.role not in WAYPOINT_ROLES:
            raise ValueError(f"unknown waypoint role {self.role!r}")


@dataclass(frozen=True)
class CoveragePath:
    waypoints: tuple[Waypoint, ...]
    total_length: float
    sweep_direction: tuple[float, float]
    line_count: int

    def positions(self) -> list[Point2D]:
        return [w.position for w in self.waypoints]


def polyline_length(points: list[Point2D]) -> float:
    return sum(distance(points[i], points[i + 1])
               for i in range(len(points) - 1))


def path_from_positions(points: list[Point2D], roles: list[str] | None = None,
                        sweep_direction: tuple[float, float] = (1.0, 0.0),
                        line_count: int = 1) -> CoveragePath:
    """Wrap bare positions (e.g. an ingested mission) as a CoveragePath."""
    if roles is None:
        roles = [ROLE_SWEEP] * len(points)
    wps = tuple(Waypoint(p, r) for p, r in zip(points, roles))
    return CoveragePath(wps, polyline_length(points), sweep_direction,
                        line_count)


# ---------------------------------------------------------------------------
# flight-line construction

# Orientation search: the classical result that an optimal sweep is
# edge-parallel holds for minimizing the line count, but the full cost
# (sweeps + connections + transits + corner tour) is regularly minimized
# slightly off-edge, where a boundary-flush chord that the corner tour
# would re-cover anyway degenerates to a vertex graze. The search
# therefore seeds with the edge directions plus a polygon-relative
# uniform grid and refines the best seeds with a shrinking pattern
# search. Grid angles are anchored to the first edge so the whole
# search rotates with its input.
_COARSE_ORIENTATIONS = 128
_REFINE_SEEDS = 4
_REFINE_ROUNDS = 26
_REFINE_SHRINK = 0.62

_VARIANTS = ((False, False), (False, True), (True, False), (True, True))


def _edge_data(p: ConvexPolygon) -> list[tuple[float, float, float, float]]:
    data = []
    for a, b in p.edges():
        dx, dy = b.x - a.x, b.y - a.y
        ln = math.hypot(dx, dy)
        data.append((a.x, a.y, -dy / ln, dx / ln))
    return data


class _Cache:
    """Per-polygon precomputation shared across orientation candidates."""

    __slots__ = ("polygon", "verts", "edge_data", "scale")

    def __init__(self, polygon: ConvexPolygon):
        self.polygon = polygon
        self.verts = [(v.x, v.y) for v in polygon.vertices]
        self.edge_data = _edge_data(polygon)
        self.scale = max(max(abs(x), abs(y)) for x, y in self.verts) + 1.0


def _line_offsets(width: float, delta: float) -> list[float]:
    """Offsets of the flight lines from the low supporting line.

    Lines at 0, delta, 2*delta, ...; if the width is not a multiple of
    delta a terminal line is clamped onto the opposite supporting line.
    """
    tol = 1e-9 * max(1.0, width)
    count = int(math.floor(width / delta + 1e-12))
    offsets = [k * delta for k in range(count + 1)]
    if width - offsets[-1] > tol:
        offsets.append(width)
    else:
        offsets[-1] = width if count > 0 else 0.0
    return offsets


def _chord(edge_data, scale: float, nx: float, ny: float, c: float,
           dx: float, dy: float):
    """Intersection of the line {q: n.q = c} with the polygon.

    Returns ((x, y), (x, y)) ordered by increasing projection onto d;
    support lines that touch a single vertex give a doubled point.
    """
    px, py = c * nx, c * ny
    t0, t1 = -math.inf, math.inf
    tol = 1e-9 * max(1.0, scale)
    for bx, by, inx, iny in edge_data:
        f = inx * (px - bx) + iny * (py - by)
        g = inx * dx + iny * dy
        if abs(g) < 1e-15:
            if f < -tol:
                return None
            continue
        t = -f / g
        if g > 0.0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
    if t1 - t0 < -1e-6 * max(1.0, scale):
        return None
    if t1 - t0 < tol:
        tm = 0.5 * (t0 + t1)
        point = (px + tm * dx, py + tm * dy)
        return point, point
    return (px + t0 * dx, py + t0 * dy), (px + t1 * dx, py + t1 * dy)


def _tour_order(verts: list[tuple[float, float]], fx: float, fy: float,
                clockwise: bool) -> list[tuple[float, float]]:
    n = len(verts)
    k0 = min(range(n),
             key=lambda i: (verts[i][0] - fx) ** 2 + (verts[i][1] - fy) ** 2)
    step = -1 if clockwise else 1
    return [verts[(k0 + step * i) % n] for i in range(n)]


def corner_tour(mprime: ConvexPolygon, from_point: Point2D,
                clockwise: bool = False) -> list[Waypoint]:
    """Perimeter tour of all vertices, starting nearest to ``from_point``.

    The tour ends at the last distinct vertex; the closing edge back to
    the start is not traversed.
    """
    verts = [(v.x, v.y) for v in mprime.vertices]
    return [Waypoint(Point2D(x, y), ROLE_TOUR)
            for x, y in _tour_order(verts, from_point.x, from_point.y,
                                    clockwise)]


def _best_tour(verts: list[tuple[float, float]], fx: float, fy: float,
               ex: float, ey: float) -> list[tuple[float, float]]:
    """Tour direction minimizing tour length plus the transit to the end.

    Ties prefer counterclockwise.
    """
    ccw = _tour_order(verts, fx, fy, clockwise=False)
    cw = _tour_order(verts, fx, fy, clockwise=True)

    def cost(tour):
        total = math.hypot(tour[0][0] - fx, tour[0][1] - fy)
        for (x0, y0), (x1, y1) in zip(tour, tour[1:]):
            total += math.hypot(x1 - x0, y1 - y0)
        return total + math.hypot(ex - tour[-1][0], ey - tour[-1][1])

    return cw if cost(cw) < cost(ccw) - 1e-12 else ccw


# ---------------------------------------------------------------------------
# candidate assembly


def _append(points: list, x: float, y: float, role: str):
    if points and math.hypot(x - points[-1][0], y - points[-1][1]) < 1e-12:
        return
    points.append((x, y, role))


def _assemble_safe(chords, order_reversed: bool, start_high: bool,
                   s: Point2D, e: Point2D, cache: _Cache,
                   include_corner_tour: bool):
    """Boustrophedon with straight chord-endpoint connections."""
    seq = list(reversed(chords)) if order_reversed else chords
    pts: list[tuple[float, float, str]] = [(s.x, s.y, ROLE_TAKEOFF)]
    high = start_high
    for idx, (lo, hi) in enumerate(seq):
        entry, exit_ = (hi, lo) if high else (lo, hi)
        entry_role = ROLE_TAKEOFF if idx == 0 else ROLE_CONNECTION
        _append(pts, entry[0], entry[1], entry_role)
        _append(pts, exit_[0], exit_[1], ROLE_SWEEP)
        high = not high
    if include_corner_tour:
        for x, y in _best_tour(cache.verts, pts[-1][0], pts[-1][1], e.x, e.y):
            _append(pts, x, y, ROLE_TOUR)
    if pts and math.hypot(e.x - pts[-1][0], e.y - pts[-1][1]) < 1e-12:
        pts[-1] = (pts[-1][0], pts[-1][1], ROLE_LANDING)
    else:
        pts.append((e.x, e.y, ROLE_LANDING))
    return pts


def _assemble_baseline(chords, offsets, order_reversed: bool, start_high: bool,
                       s: Point2D, e: Point2D, normal: tuple[float, float]):
    """Boustrophedon with perpendicular connections (may exit the region)."""
    seq = list(reversed(chords)) if order_reversed else list(chords)
    offs = list(reversed(offsets)) if order_reversed else list(offsets)
    nx, ny = normal
    pts: list[tuple[float, float, str]] = [(s.x, s.y, ROLE_TAKEOFF)]
    high = start_high
    for idx, (lo, hi) in enumerate(seq):
        if idx == 0:
            entry, exit_ = (hi, lo) if high else (lo, hi)
            _append(pts, entry[0], entry[1], ROLE_TAKEOFF)
        else:
            gap = offs[idx] - offs[idx - 1]
            _append(pts, pts[-1][0] + gap * nx, pts[-1][1] + gap * ny,
                    ROLE_CONNECTION)
            exit_ = lo if high else hi
        _append(pts, exit_[0], exit_[1], ROLE_SWEEP)
        high = not high
    if pts and math.hypot(e.x - pts[-1][0], e.y - pts[-1][1]) < 1e-12:
        pts[-1] = (pts[-1][0], pts[-1][1], ROLE_LANDING)
    else:
        pts.append((e.x, e.y, ROLE_LANDING))
    return pts


def _cost(pts) -> float:
    return sum(math.hypot(pts[i + 1][0] - pts[i][0], pts[i + 1][1] - pts[i][1])
               for i in range(len(pts) - 1))


def _direction_family(cache: _Cache, direction: tuple[float, float],
                      delta: float):
    """Chords of the flight-line family for one sweep direction.

    Lines run parallel to ``direction``, anchored on the supporting line
    at the low end of the inward normal n = rot90(direction).
    """
    dx, dy = direction
    nx, ny = -dy, dx
    projs = [nx * x + ny * y for x, y in cache.verts]
    o_min = min(projs)
    width = max(projs) - o_min
    offsets = _line_offsets(width, delta)
    snap_tol = 1e-6 * cache.scale
    chords = []
    for off in offsets:
        c = o_min + off
        ch = _chord(cache.edge_data, cache.scale, nx, ny, c, dx, dy)
        if ch is None or ch[0] is ch[1]:
            # support line grazing a vertex: the exact touch point is the
            # vertex itself, keeping waypoints inside the polygon
            k = min(range(len(projs)), key=lambda i: abs(projs[i] - c))
            if ch is None or (abs(projs[k] - c) <= snap_tol
                              and math.hypot(cache.verts[k][0] - ch[0][0],
                                             cache.verts[k][1] - ch[0][1])
                              <= snap_tol):
                ch = (cache.verts[k], cache.verts[k])
        chords.append(ch)
    return chords, offsets, (nx, ny)


def _finish(pts, direction, line_count) -> CoveragePath:
    wps = tuple(Waypoint(Point2D(x, y), role) for x, y, role in pts)
    return CoveragePath(wps, _cost(pts), direction, line_count)


def _quantize(cost: float) -> int:
    return int(math.floor(cost * 1e9 + 0.5))


def _eval_direction(cache: _Cache, angle: float, delta: float, s: Point2D,
                    e: Point2D, include_corner_tour: bool):
    """Best of the four traversal variants for one orientation.

    Returns (cost, first_x, first_y, variant, pts, line_count, direction).
    """
    direction = (math.cos(angle), math.sin(angle))
    chords, offsets, _ = _direction_family(cache, direction, delta)
    best = None
    for variant, (rev, high) in enumerate(_VARIANTS):
        pts = _assemble_safe(chords, rev, high, s, e, cache,
                             include_corner_tour)
        cand = (_cost(pts), pts[1][0], pts[1][1], variant, pts,
                len(offsets), direction)
        if best is None or cand[:4] < best[:4]:
            best = cand
    return best


def path_for_direction(mprime: ConvexPolygon, direction: tuple[float, float],
                       delta: float, s: Point2D, e: Point2D,
                       include_corner_tour: bool = True) -> CoveragePath:
    """Best traversal of the flight-line family for one sweep direction.

    Tries both line orders and both first-line entry ends; the returned
    path runs s -> sweep -> (corner tour) -> e.
    """
    dx, dy = direction
    ln = math.hypot(dx, dy)
    if not math.isfinite(ln) or ln < 1e-15:
        raise ValueError("direction must be a non-zero vector")
    cache = _Cache(mprime)
    best = _eval_direction(cache, math.atan2(dy, dx), delta, s, e,
                           include_corner_tour)
    return _finish(best[4], best[6], best[5])


def rcpp(mprime: ConvexPolygon, delta: float, s: Point2D, e: Point2D,
         include_corner_tour: bool = True,
         orientation_samples: int = _COARSE_ORIENTATIONS,
         refine_seeds: int = _REFINE_SEEDS,
         refine_rounds: int = _REFINE_ROUNDS) -> CoveragePath:
    """Sweep-direction search minimizing total path length.

    Every candidate is a full boustrophedon (clipped flight lines,
    chord-endpoint connections, transits and the closing corner tour).
    Candidates are the polygon's edge directions, a uniform orientation
    grid anchored to the first edge, and pattern-search refinements of
    the best grid seeds; the minimum total length wins. Ties break
    toward edge candidates in index order, then the lexicographically
    smallest first waypoint.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    cache = _Cache(mprime)
    verts = cache.verts
    n = len(verts)

    edge_angles = []
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        edge_angles.append(math.atan2(y1 - y0, x1 - x0))

    def evaluate(angle, rank):
        cost, fx, fy, variant, pts, lc, d = _eval_direction(
            cache, angle, delta, s, e, include_corner_tour)
        return (_quantize(cost), rank, fx, fy, variant), cost, angle, pts, lc, d

    pool = []
    for i, ang in enumerate(edge_angles):
        pool.append(evaluate(ang, i))
        pool.append(evaluate(ang + math.pi, n + i))
    spacing = 2.0 * math.pi / orientation_samples
    for k in range(orientation_samples):
        pool.append(evaluate(edge_angles[0] + k * spacing, 2 * n + k))

    seeds = []
    for entry in sorted(pool, key=lambda c: c[0]):
        ang = entry[2]
        if all(min(abs(ang - other) % (2 * math.pi),
                   2 * math.pi - abs(ang - other) % (2 * math.pi))
               > 0.5 * spacing for other in seeds):
            seeds.append(ang)
        if len(seeds) >= refine_seeds:
            break

    next_rank = 2 * n + orientation_samples
    for seed_idx, seed in enumerate(seeds):
        angle = seed
        best = evaluate(angle, next_rank + seed_idx)
        step = spacing
        for _ in range(refine_rounds):
            for cand_angle in (angle - step, angle + step):
                cand = evaluate(cand_angle, next_rank + seed_idx)
                if cand[1] < best[1]:
                    best = cand
                    angle = cand_angle
            step *= _REFINE_SHRINK
        pool.append(best)

    winner = min(pool, key=lambda c: c[0])
    return _finish(winner[3], winner[5], winner[4])


def plan_coverage(M: ConvexPolygon, params: PlanParams,
                  include_corner_tour: bool = True,
                  tol: float = DEFAULT_TOL) -> CoveragePath:
    """Full coverage plan: erode by the footprint radius, then sweep.

    Start and end must lie inside the eroded region so every transit
    stays collision-safe.
    """
    try:
        mprime = erode(M, params.footprint_radius, tol)
    except EmptyErosion as exc:
        raise FootprintTooLarge(
            f"footprint radius {params.footprint_radius} exceeds the "
            f"region inradius; the coverage path degenerates to a single "
            f"point") from exc
    if not contains(mprime, params.start, tol):
        raise StartOutside("start point lies outside the eroded region")
    if not contains(mprime, params.end, tol):
        raise EndOutside("end point lies outside the eroded region")
    return rcpp(mprime, params.line_spacing, params.start, params.end,
                include_corner_tour=include_corner_tour)


def plan_baseline(M: ConvexPolygon, delta: float, s: Point2D,
                  e: Point2D) -> CoveragePath:
    """Comparison planner: back-and-forth over the uneroded region.

    Flight lines span the full polygon and consecutive lines are joined
    by perpendicular steps, so the vehicle rides the region boundary and
    the connections may exit it. No erosion, no corner tour.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    cache = _Cache(M)
    best = None
    best_key = None
    for edge_idx, (a, b) in enumerate(M.edges()):
        dx, dy = b.x - a.x, b.y - a.y
        ln = math.hypot(dx, dy)
        direction = (dx / ln, dy / ln)
        chords, offsets, normal = _direction_family(cache, direction, delta)
        for variant, (rev, high) in enumerate(_VARIANTS):
            pts = _assemble_baseline(chords, offsets, rev, high, s, e, normal)
            key = (_quantize(_cost(pts)), edge_idx, pts[1][0], pts[1][1],
                   variant)
            if best_key is None or key < best_key:
                best = (pts, direction, len(offsets))
                best_key = key
    return _finish(*best)
