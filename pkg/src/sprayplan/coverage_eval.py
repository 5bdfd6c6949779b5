"""Rasterized ground-truth evaluation of coverage paths.

A path is swept as a union of capsules (disk of the footprint radius
dragged along each segment) over a boolean grid; coverage fractions,
kinematic flight time and a densely sampled safety audit come out of
the same pass. This module is the oracle the planner is judged against,
so it never reuses the planner's own geometry beyond the polygon type.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry2d import ConvexPolygon, Point2D
from .planner import CoveragePath


class PathOutsideGrid(ValueError):
    """The path inflated by the footprint radius exceeds the grid bounds."""


@dataclass
class CoverageGrid:
    """Boolean occupancy over an axis-aligned box containing the region."""

    cell_size: float
    x0: float
    y0: float
    covered: np.ndarray        # uint8 (ny, nx), 1 = swept
    region_mask: np.ndarray    # uint8, 1 = cell center inside M
    inner_mask: np.ndarray     # uint8, 1 = cell center inside M'

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        ny, nx = self.covered.shape
        return (self.x0, self.y0,
                self.x0 + nx * self.cell_size, self.y0 + ny * self.cell_size)

    def cell_centers(self, jj: np.ndarray, ii: np.ndarray):
        return (self.x0 + (ii + 0.5) * self.cell_size,
                self.y0 + (jj + 0.5) * self.cell_size)


@dataclass(frozen=True)
class EvalReport:
    covered_fraction_M: float
    covered_fraction_Mprime: float
    path_length: float
    est_flight_time: float
    safety_violations: int
    max_incursion: float


@dataclass(frozen=True)
class UncoveredSummary:
    count: int
    max_distance_to_boundary: float


def _vertex_arrays(p: ConvexPolygon) -> tuple[np.ndarray, np.ndarray]:
    vx = np.array([v.x for v in p.vertices], dtype=np.float64)
    vy = np.array([v.y for v in p.vertices], dtype=np.float64)
    return vx, vy


def make_grid(M: ConvexPolygon, Mprime: ConvexPolygon | None, r: float,
              cell_size: float,
              extra_points: list[Point2D] | None = None) -> CoverageGrid:
    """Grid over the bounding box of M inflated by r (plus one cell).

    ``extra_points`` widens the box for paths that exit the region, such
    as the baseline planner's perpendicular connections.
    """
    if not cell_size > 0:
        raise ValueError("cell_size must be positive")
    xs = [v.x for v in M.vertices] + [p.x for p in extra_points or []]
    ys = [v.y for v in M.vertices] + [p.y for p in extra_points or []]
    x0 = min(xs) - r - cell_size
    y0 = min(ys) - r - cell_size
    nx = int(math.ceil((max(xs) + r + cell_size - x0) / cell_size))
    ny = int(math.ceil((max(ys) + r + cell_size - y0) / cell_size))
    covered = np.zeros((ny, nx), dtype=np.uint8)
    region_mask = np.zeros((ny, nx), dtype=np.uint8)
    vx, vy = _vertex_arrays(M)
    kernels.polygon_mask(region_mask, x0, y0, cell_size, vx, vy, 0.0)
    inner_mask = np.zeros((ny, nx), dtype=np.uint8)
    if Mprime is not None:
        ivx, ivy = _vertex_arrays(Mprime)
        kernels.polygon_mask(inner_mask, x0, y0, cell_size, ivx, ivy, 0.0)
    return CoverageGrid(cell_size, x0, y0, covered, region_mask, inner_mask)


def sweep_coverage(path: CoveragePath, r: float,
                   grid: CoverageGrid) -> CoverageGrid:
    """Mark every cell whose center is within r of the path. Idempotent."""
    points = path.positions()
    if not points:
        return grid
    bx0, by0, bx1, by1 = grid.bounds
    for p in points:
        if not (bx0 <= p.x - r and p.x + r <= bx1
                and by0 <= p.y - r and p.y + r <= by1):
            raise PathOutsideGrid(
                f"waypoint ({p.x:.3f}, {p.y:.3f}) inflated by {r} exceeds "
                f"grid bounds {grid.bounds}")
    if len(points) == 1:
        p = points[0]
        kernels.mark_capsule(grid.covered, grid.x0, grid.y0, grid.cell_size,
                             p.x, p.y, p.x, p.y, r)
        return grid
    for a, b in zip(points, points[1:]):
        kernels.mark_capsule(grid.covered, grid.x0, grid.y0, grid.cell_size,
                             a.x, a.y, b.x, b.y, r)
    return grid


def sample_polyline(points: list[Point2D], step: float) -> np.ndarray:
    """Points along a polyline at spacing <= step, vertices included.

    Returns an (n, 2) array; a single input point maps to one row.
    """
    if not points:
        return np.empty((0, 2))
    samples = [np.array([[points[0].x, points[0].y]])]
    for a, b in zip(points, points[1:]):
        seg_len = math.hypot(b.x - a.x, b.y - a.y)
        n = max(1, int(math.ceil(seg_len / step)))
        t = np.arange(1, n + 1, dtype=np.float64) / n
        samples.append(np.column_stack([a.x + t * (b.x - a.x),
                                        a.y + t * (b.y - a.y)]))
    return np.concatenate(samples)


def safety_audit(M: ConvexPolygon, path: CoveragePath, r: float,
                 sample_step: float = 0.01,
                 tol: float = 1e-6) -> tuple[int, float]:
    """(violation count, max incursion) over densely sampled path points.

    A sample violates when its distance to the region boundary is below
    r - tol, i.e. the footprint pokes outside; the incursion is how far.
    """
    pts = sample_polyline(path.positions(), sample_step)
    if len(pts) == 0:
        return 0, 0.0
    vx, vy = _vertex_arrays(M)
    dist = kernels.signed_distance_batch(pts[:, 0], pts[:, 1], vx, vy)
    violations = int(np.count_nonzero(dist < r - tol))
    max_incursion = float(max(0.0, np.max(r - dist)))
    return violations, max_incursion


def _fraction(covered: np.ndarray, mask: np.ndarray) -> float:
    total = int(np.count_nonzero(mask))
    if total == 0:
        return 0.0
    hit = int(np.count_nonzero(np.logical_and(covered, mask)))
    return hit / total


def evaluate(M: ConvexPolygon, Mprime: ConvexPolygon, path: CoveragePath,
             r: float, speed: float, cell_size: float,
             sample_step: float = 0.01, safety_tol: float = 1e-6) -> EvalReport:
    """Coverage fractions, kinematic time estimate and safety audit."""
    if not speed > 0:
        raise ValueError("speed must be positive")
    grid = make_grid(M, Mprime, r, cell_size, extra_points=path.positions())
    sweep_coverage(path, r, grid)
    violations, max_incursion = safety_audit(M, path, r, sample_step,
                                             safety_tol)
    return EvalReport(
        covered_fraction_M=_fraction(grid.covered, grid.region_mask),
        covered_fraction_Mprime=_fraction(grid.covered, grid.inner_mask),
        path_length=path.total_length,
        est_flight_time=path.total_length / speed,
        safety_violations=violations,
        max_incursion=max_incursion,
    )


def uncovered_regions(M: ConvexPolygon, grid: CoverageGrid,
                      r: float) -> UncoveredSummary:
    """Summary of region cells the sweep missed.

    When the eroded region is fully covered, every uncovered cell must
    sit in the boundary band of depth r + cell_size.
    """
    missed = np.logical_and(grid.region_mask, np.logical_not(grid.covered))
    jj, ii = np.nonzero(missed)
    if len(jj) == 0:
        return UncoveredSummary(0, 0.0)
    cx, cy = grid.cell_centers(jj, ii)
    vx, vy = _vertex_arrays(M)
    dist = kernels.signed_distance_batch(cx, cy, vx, vy)
    return UncoveredSummary(int(len(jj)), float(np.max(dist)))
