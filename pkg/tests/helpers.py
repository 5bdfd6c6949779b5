"""Shared test utilities: random geometry and fixture paths."""

from __future__ import annotations

import math
import pathlib

import numpy as np

from sprayplan.geometry2d import (
    ConvexPolygon,
    Point2D,
    inradius,
    validate_convex,
)

DATA_DIR = pathlib.Path(__file__).parent / "data"


def make_convex_polygon(rng: np.random.Generator, n_vertices: int,
                        radius: float, jitter: float = 0.25,
                        center: tuple[float, float] = (0.0, 0.0)) -> ConvexPolygon:
    """Perturbed regular n-gon; retries until strictly convex."""
    for _ in range(100):
        angles = (2.0 * math.pi * np.arange(n_vertices) / n_vertices
                  + rng.uniform(-jitter, jitter, n_vertices)
                  * 2.0 * math.pi / n_vertices)
        radii = radius * rng.uniform(0.75, 1.0, n_vertices)
        pts = [Point2D(center[0] + r * math.cos(a),
                       center[1] + r * math.sin(a))
               for a, r in zip(angles, radii)]
        try:
            return validate_convex(pts)
        except ValueError:
            continue
    raise RuntimeError("could not generate a convex polygon")


def polygon_diameter(p: ConvexPolygon) -> float:
    verts = p.vertices
    return max(math.hypot(a.x - b.x, a.y - b.y)
               for i, a in enumerate(verts) for b in verts[i + 1:])


def sized_polygon_with_inradius(rng: np.random.Generator, n_vertices: int,
                                diameter: float,
                                min_inradius_frac: float = 0.18):
    """Random convex polygon scaled to ~diameter with a fat-enough core.

    Returns (polygon, inradius).
    """
    for _ in range(100):
        poly = make_convex_polygon(rng, n_vertices, diameter / 2.0)
        rin = inradius(poly)
        if rin >= min_inradius_frac * diameter:
            return poly, rin
    raise RuntimeError("could not generate a fat convex polygon")


def rotate_polygon(p: ConvexPolygon, angle: float) -> ConvexPolygon:
    c, s = math.cos(angle), math.sin(angle)
    return validate_convex([Point2D(c * v.x - s * v.y, s * v.x + c * v.y)
                            for v in p.vertices])


def rotate_point(q: Point2D, angle: float) -> Point2D:
    c, s = math.cos(angle), math.sin(angle)
    return Point2D(c * q.x - s * q.y, s * q.x + c * q.y)


def square(side: float = 10.0) -> ConvexPolygon:
    return validate_convex([Point2D(0, 0), Point2D(side, 0),
                            Point2D(side, side), Point2D(0, side)])
