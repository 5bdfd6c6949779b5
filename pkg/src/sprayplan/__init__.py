"""Coverage path planning toolkit for spraying drones.

Fits a paraboloid spray model to droplet observations, plans a
collision-safe back-and-forth route over a convex region, evaluates
coverage and safety on a raster oracle, and exports flight-ready
waypoint missions and figures.
"""

from .geodesy import GeodeticCoord, GeoReference, NedCoord, geodetic_to_ned, \
    ned_to_geodetic
from .geometry2d import ConvexPolygon, Point2D, Segment2D, validate_convex
from .planner import CoveragePath, PlanParams, Waypoint, plan_baseline, \
    plan_coverage
from .sprinkler import DropletSample, FootprintDisk, NoiseModel, Paraboloid, \
    fit, footprint

__version__ = "0.1.0"

__all__ = [
    "ConvexPolygon", "Point2D", "Segment2D", "validate_convex",
    "Paraboloid", "NoiseModel", "DropletSample", "FootprintDisk",
    "fit", "footprint",
    "PlanParams", "Waypoint", "CoveragePath", "plan_coverage",
    "plan_baseline",
    "GeodeticCoord", "NedCoord", "GeoReference", "geodetic_to_ned",
    "ned_to_geodetic",
    "__version__",
]
