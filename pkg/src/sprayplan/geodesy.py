"""Geodetic <-> local NED conversion on the WGS-84 ellipsoid.

Mission regions arrive as latitude/longitude and leave as waypoint
files, so both directions go through ECEF and a local tangent frame
anchored at the mission origin. Valid within 50 km of the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_WGS84_A = 6378137.0
_WGS84_F = 1.0 / 298.257223563
_WGS84_E2 = _WGS84_F * (2.0 - _WGS84_F)
_WGS84_B = _WGS84_A * (1.0 - _WGS84_F)

MAX_FRAME_RADIUS = 50_000.0


class OutOfFrame(ValueError):
    """Point too far from the origin for the tangent-frame conversion."""


@dataclass(frozen=True)
class GeodeticCoord:
    """Latitude/longitude in degrees, ellipsoidal altitude in meters."""

    latitude: float
    longitude: float
    altitude: float = 0.0

    def __post_init__(self):
        if not all(map(math.isfinite, (self.latitude, self.longitude, self.altitude))):
            raise ValueError("coordinates must be finite")
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude {self.latitude} out of [-90, 90]")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError(f"longitude {self.longitude} out of [-180, 180]")


@dataclass(frozen=True)
class NedCoord:
    north: float
    east: float
    down: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.north, self.east, self.down))):
            raise ValueError("coordinates must be finite")


@dataclass(frozen=True)
class GeoReference:
    """Geodetic origin anchoring the local NED frame."""

    origin: GeodeticCoord


def _to_ecef(g: GeodeticCoord) -> tuple[float, float, float]:
    lat = math.radians(g.latitude)
    lon = math.radians(g.longitude)
    sin_lat, cos_lat = math.sin(lat), math.cos(lat)
    n = _WGS84_A / math.sqrt(1.0 - _WGS84_E2 * sin_lat * sin_lat)
    x = (n + g.altitude) * cos_lat * math.cos(lon)
    y = (n + g.altitude) * cos_lat * math.sin(lon)
    z = (n * (1.0 - _WGS84_E2) + g.altitude) * sin_lat
    return x, y, z


def _from_ecef(x: float, y: float, z: float) -> GeodeticCoord:
    lon = math.atan2(y, x)
    p = math.hypot(x, y)
    if p < 1e-9:  # polar axis
        lat = math.copysign(math.pi / 2.0, z)
        return GeodeticCoord(math.degrees(lat), math.degrees(lon),
                             abs(z) - _WGS84_B)
    lat = math.atan2(z, p * (1.0 - _WGS84_E2))
    alt = 0.0
    for _ in range(10):
        sin_lat = math.sin(lat)
        n = _WGS84_A / math.sqrt(1.0 - _WGS84_E2 * sin_lat * sin_lat)
        alt = p / math.cos(lat) - n
        new_lat = math.atan2(z, p * (1.0 - _WGS84_E2 * n / (n + alt)))
        if abs(new_lat - lat) < 1e-14:
            lat = new_lat
            break
        lat = new_lat
    return GeodeticCoord(math.degrees(lat), math.degrees(lon), alt)


def _rotation(origin: GeodeticCoord):
    lat = math.radians(origin.latitude)
    lon = math.radians(origin.longitude)
    sin_lat, cos_lat = math.sin(lat), math.cos(lat)
    sin_lon, cos_lon = math.sin(lon), math.cos(lon)
    # Rows: unit north, east, down vectors expressed in ECEF.
    return ((-sin_lat * cos_lon, -sin_lat * sin_lon, cos_lat),
            (-sin_lon, cos_lon, 0.0),
            (-cos_lat * cos_lon, -cos_lat * sin_lon, -sin_lat))


def geodetic_to_ned(ref: GeoReference, g: GeodeticCoord) -> NedCoord:
    """NED offset of g relative to the reference origin."""
    ox, oy, oz = _to_ecef(ref.origin)
    px, py, pz = _to_ecef(g)
    dx, dy, dz = px - ox, py - oy, pz - oz
    rot = _rotation(ref.origin)
    return NedCoord(
        rot[0][0] * dx + rot[0][1] * dy + rot[0][2] * dz,
        rot[1][0] * dx + rot[1][1] * dy + rot[1][2] * dz,
        rot[2][0] * dx + rot[2][1] * dy + rot[2][2] * dz,
    )


def ned_to_geodetic(ref: GeoReference, n: NedCoord) -> GeodeticCoord:
    """Exact inverse of geodetic_to_ned, valid within 50 km of the origin."""
    radius = math.sqrt(n.north * n.north + n.east * n.east + n.down * n.down)
    if radius >= MAX_FRAME_RADIUS:
        raise OutOfFrame(
            f"point {radius:.0f} m from origin exceeds the "
            f"{MAX_FRAME_RADIUS:.0f} m tangent-frame bound")
    ox, oy, oz = _to_ecef(ref.origin)
    rot = _rotation(ref.origin)
    # Transpose of the row-orthonormal rotation.
    dx = rot[0][0] * n.north + rot[1][0] * n.east + rot[2][0] * n.down
    dy = rot[0][1] * n.north + rot[1][1] * n.east + rot[2][1] * n.down
    dz = rot[0][2] * n.north + rot[1][2] * n.east + rot[2][2] * n.down
    return _from_ecef(ox + dx, oy + dy, oz + dz)
