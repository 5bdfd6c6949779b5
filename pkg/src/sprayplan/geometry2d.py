"""Planar geometry for strictly convex polygons.

Convex regions are the planning substrate: routes are built from inward
offsets (safety erosion), support-width queries (sweep-direction search)
and chord clipping (flight lines). Everything here is a pure function
over immutable values; tolerances are absolute meters and default to
``DEFAULT_TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_TOL = 1e-9

# Relative threshold below which a cross product counts as collinear.
_COLLINEAR_EPS = 1e-12


class TooFewVertices(ValueError):
    """Fewer than three vertices were supplied."""


class NotConvex(ValueError):
    """Some vertex turns right (or the polygon self-intersects)."""


class Degenerate(ValueError):
    """Collinear or duplicate vertices."""


class EmptyErosion(ValueError):
    """The inset meets or exceeds the inradius; the region degenerates."""


@dataclass(frozen=True)
class Point2D:
    """A planar point in meters (x = local east, y = local north)."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")


@dataclass(frozen=True)
class Segment2D:
    a: Point2D
    b: Point2D

    def __post_init__(self):
        if distance(self.a, self.b) < 1e-12:
            raise ValueError("segment endpoints coincide")

    @property
    def length(self) -> float:
        return distance(self.a, self.b)


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon, counterclockwise vertex order.

    Construct through :func:`validate_convex`; the constructor itself
    trusts its input.
    """

    vertices: tuple[Point2D, ...]

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self):
        """Yield (a, b) pairs of consecutive vertices, wrapping around."""
        verts = self.vertices
        for i, a in enumerate(verts):
            yield a, verts[(i + 1) % len(verts)]


def distance(p: Point2D, q: Point2D) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def _cross(ox: float, oy: float, ax: float, ay: float, bx: float, by: float) -> float:
    """Cross product of (a-o) x (b-o)."""
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _shoelace(pts: list[tuple[float, float]]) -> float:
    acc = 0.0
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return 0.5 * acc


def validate_convex(vertices: list[Point2D]) -> ConvexPolygon:
    """Validate and canonicalize a vertex list into a CCW convex polygon.

    Clockwise input is reversed; collinear triples, duplicate vertices
    and right turns are rejected.
    """
    if len(vertices) < 3:
        raise TooFewVertices(f"need at least 3 vertices, got {len(vertices)}")
    pts = [(v.x, v.y) for v in vertices]
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        if math.hypot(x1 - x0, y1 - y0) < 1e-9:
            raise Degenerate(f"vertices {i} and {(i + 1) % n} coincide")
    if _shoelace(pts) < 0.0:
        pts.reverse()
        vertices = list(reversed(vertices))
    for i in range(n):
        ox, oy = pts[i]
        ax, ay = pts[(i + 1) % n]
        bx, by = pts[(i + 2) % n]
        cross = _cross(ox, oy, ax, ay, bx, by)
        scale = math.hypot(ax - ox, ay - oy) * math.hypot(bx - ax, by - ay)
        if abs(cross) <= _COLLINEAR_EPS * scale:
            raise Degenerate(f"collinear vertices around index {(i + 1) % n}")
        if cross < 0.0:
            raise NotConvex(f"right turn at vertex index {(i + 1) % n}")
    return ConvexPolygon(tuple(vertices))


def area(p: ConvexPolygon) -> float:
    """Shoelace area in square meters (positive for CCW polygons)."""
    return _shoelace([(v.x, v.y) for v in p.vertices])


def perimeter(p: ConvexPolygon) -> float:
    return sum(distance(a, b) for a, b in p.edges())


def centroid(p: ConvexPolygon) -> Point2D:
    """Area centroid."""
    pts = [(v.x, v.y) for v in p.vertices]
    n = len(pts)
    cx = cy = acc = 0.0
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        w = x0 * y1 - x1 * y0
        acc += w
        cx += (x0 + x1) * w
        cy += (y0 + y1) * w
    acc *= 0.5
    return Point2D(cx / (6.0 * acc), cy / (6.0 * acc))


def _inward_normals(p: ConvexPolygon) -> list[tuple[float, float, float, float]]:
    """Per edge: (base_x, base_y, unit inward normal x, y).

    For a CCW polygon the interior lies to the left of each directed
    edge, so the inward normal of direction (dx, dy) is (-dy, dx).
    """
    out = []
    for a, b in p.edges():
        dx, dy = b.x - a.x, b.y - a.y
        ln = math.hypot(dx, dy)
        out.append((a.x, a.y, -dy / ln, dx / ln))
    return out


def _clip_halfplane(pts: list[tuple[float, float]], nx: float, ny: float,
                    c: float) -> list[tuple[float, float]]:
    """Keep the part of a convex CCW polygon with n·p >= c."""
    out: list[tuple[float, float]] = []
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        f0 = nx * x0 + ny * y0 - c
        f1 = nx * x1 + ny * y1 - c
        if f0 >= 0.0:
            out.append((x0, y0))
        if (f0 > 0.0 > f1) or (f0 < 0.0 < f1):
            t = f0 / (f0 - f1)
            out.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
    return out


def _cleanup(pts: list[tuple[float, float]], tol: float) -> list[tuple[float, float]]:
    """Drop near-duplicate and collinear vertices left over by clipping."""
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        dedup = []
        for x, y in pts:
            if dedup and math.hypot(x - dedup[-1][0], y - dedup[-1][1]) < tol:
                continue
            dedup.append((x, y))
        while len(dedup) >= 2 and math.hypot(dedup[0][0] - dedup[-1][0],
                                             dedup[0][1] - dedup[-1][1]) < tol:
            dedup.pop()
        if len(dedup) != len(pts):
            changed = True
        pts = dedup
        if len(pts) < 3:
            break
        kept = []
        n = len(pts)
        for i in range(n):
            ox, oy = pts[(i - 1) % n]
            ax, ay = pts[i]
            bx, by = pts[(i + 1) % n]
            cross = _cross(ox, oy, ax, ay, bx, by)
            scale = math.hypot(ax - ox, ay - oy) * math.hypot(bx - ax, by - ay)
            if abs(cross) <= _COLLINEAR_EPS * scale:
                changed = True
                continue
            kept.append((ax, ay))
        pts = kept
    return pts


def erode(p: ConvexPolygon, inset: float, tol: float = DEFAULT_TOL) -> ConvexPolygon:
    """Inner parallel polygon: every edge translated inward by ``inset``.

    The result is the set of points at distance >= inset from the
    boundary. Edges whose inward offset becomes redundant are dropped.
    Raises :class:`EmptyErosion` when the inset reaches the inradius.
    """
    if inset <= 0.0:
        raise ValueError("inset must be positive")
    pts = [(v.x, v.y) for v in p.vertices]
    for bx, by, nx, ny in _inward_normals(p):
        c = nx * bx + ny * by + inset
        pts = _clip_halfplane(pts, nx, ny, c)
        if len(pts) < 3:
            raise EmptyErosion(f"inset {inset} leaves no interior region")
    pts = _cleanup(pts, tol)
    if len(pts) < 3 or _shoelace(pts) <= tol * tol:
        raise EmptyErosion(f"inset {inset} leaves no interior region")
    return ConvexPolygon(tuple(Point2D(x, y) for x, y in pts))


def inradius(p: ConvexPolygon) -> float:
    """Radius of the largest inscribed circle (bisection on erosion)."""
    hi = 0.5 * min(width_in_direction(p, (nx, ny))
                   for _, _, nx, ny in _inward_normals(p))
    lo = 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        try:
            erode(p, mid)
            lo = mid
        except EmptyErosion:
            hi = mid
    return lo


def width_in_direction(p: ConvexPolygon, direction: tuple[float, float]) -> float:
    """Support width: extent of the polygon projected onto a unit vector."""
    dx, dy = direction
    if abs(math.hypot(dx, dy) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    projs = [dx * v.x + dy * v.y for v in p.vertices]
    return max(projs) - min(projs)


def contains(p: ConvexPolygon, q: Point2D, tol: float = DEFAULT_TOL) -> bool:
    """True if q is inside the polygon or within tol of its boundary."""
    for bx, by, nx, ny in _inward_normals(p):
        if nx * (q.x - bx) + ny * (q.y - by) < -tol:
            return False
    return True


def _point_segment_distance(qx: float, qy: float, ax: float, ay: float,
                            bx: float, by: float) -> float:
    ux, uy = bx - ax, by - ay
    wx, wy = qx - ax, qy - ay
    l2 = ux * ux + uy * uy
    t = (wx * ux + wy * uy) / l2 if l2 > 0.0 else 0.0
    t = min(1.0, max(0.0, t))
    return math.hypot(wx - t * ux, wy - t * uy)


def distance_to_boundary(p: ConvexPolygon, q: Point2D) -> float:
    """Signed distance to the polygon boundary: positive inside."""
    inside = True
    best = math.inf
    for a, b in p.edges():
        if _cross(a.x, a.y, b.x, b.y, q.x, q.y) < 0.0:
            inside = False
        d = _point_segment_distance(q.x, q.y, a.x, a.y, b.x, b.y)
        if d < best:
            best = d
    return best if inside else -best


def clip_segment(p: ConvexPolygon, s: Segment2D,
                 tol: float = DEFAULT_TOL) -> Segment2D | None:
    """Sub-segment of s inside the polygon, or None when empty.

    Parametric half-plane clipping; results shorter than 1e-9 m
    (tangencies) are reported as empty.
    """
    dx, dy = s.b.x - s.a.x, s.b.y - s.a.y
    t0, t1 = 0.0, 1.0
    for bx, by, nx, ny in _inward_normals(p):
        f = nx * (s.a.x - bx) + ny * (s.a.y - by)
        g = nx * dx + ny * dy
        if abs(g) < 1e-15:
            if f < -tol:
                return None
            continue
        t = -f / g
        if g > 0.0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
        if t0 > t1:
            return None
    a = Point2D(s.a.x + t0 * dx, s.a.y + t0 * dy)
    b = Point2D(s.a.x + t1 * dx, s.a.y + t1 * dy)
    if distance(a, b) < 1e-9:
        return None
    return Segment2D(a, b)
