import math

import numpy as np
import pytest

from sprayplan.geodesy import (
    GeodeticCoord,
    GeoReference,
    NedCoord,
    OutOfFrame,
    geodetic_to_ned,
    ned_to_geodetic,
)

HOME = GeodeticCoord(19.467468, -99.193345, 0.0)

_A = 6378137.0
_F = 1.0 / 298.257223563
_B = _A * (1.0 - _F)


def vincenty_distance(g1: GeodeticCoord, g2: GeodeticCoord) -> float:
    """Inverse geodesic distance on WGS-84 (independent oracle)."""
    l1, l2 = math.radians(g1.latitude), math.radians(g2.latitude)
    dlon = math.radians(g2.longitude - g1.longitude)
    u1 = math.atan((1.0 - _F) * math.tan(l1))
    u2 = math.atan((1.0 - _F) * math.tan(l2))
    su1, cu1 = math.sin(u1), math.cos(u1)
    su2, cu2 = math.sin(u2), math.cos(u2)
    lam = dlon
    for _ in range(200):
        sl, cl = math.sin(lam), math.cos(lam)
        sin_sigma = math.hypot(cu2 * sl, cu1 * su2 - su1 * cu2 * cl)
        if sin_sigma == 0.0:
            return 0.0
        cos_sigma = su1 * su2 + cu1 * cu2 * cl
        sigma = math.atan2(sin_sigma, cos_sigma)
        sin_alpha = cu1 * cu2 * sl / sin_sigma
        cos2_alpha = 1.0 - sin_alpha * sin_alpha
        cos_2sm = (cos_sigma - 2.0 * su1 * su2 / cos2_alpha
                   if cos2_alpha else 0.0)
        c = _F / 16.0 * cos2_alpha * (4.0 + _F * (4.0 - 3.0 * cos2_alpha))
        lam_prev = lam
        lam = dlon + (1.0 - c) * _F * sin_alpha * (
            sigma + c * sin_sigma * (
                cos_2sm + c * cos_sigma * (-1.0 + 2.0 * cos_2sm ** 2)))
        if abs(lam - lam_prev) < 1e-14:
            break
    u_sq = cos2_alpha * (_A ** 2 - _B ** 2) / _B ** 2
    big_a = 1.0 + u_sq / 16384.0 * (
        4096.0 + u_sq * (-768.0 + u_sq * (320.0 - 175.0 * u_sq)))
    big_b = u_sq / 1024.0 * (
        256.0 + u_sq * (-128.0 + u_sq * (74.0 - 47.0 * u_sq)))
    delta = big_b * sin_sigma * (
        cos_2sm + big_b / 4.0 * (
            cos_sigma * (-1.0 + 2.0 * cos_2sm ** 2)
            - big_b / 6.0 * cos_2sm * (-3.0 + 4.0 * sin_sigma ** 2)
            * (-3.0 + 4.0 * cos_2sm ** 2)))
    return _B * big_a * (sigma - delta)


def meridian_radius(lat_deg: float) -> float:
    e2 = _F * (2.0 - _F)
    s = math.sin(math.radians(lat_deg))
    return _A * (1.0 - e2) / (1.0 - e2 * s * s) ** 1.5


class TestForward:
    def test_origin_maps_to_zero(self):
        ref = GeoReference(HOME)
        n = geodetic_to_ned(ref, HOME)
        assert abs(n.north) < 1e-9 and abs(n.east) < 1e-9 and abs(n.down) < 1e-9

    def test_meridian_arc_at_equator(self):
        ref = GeoReference(GeodeticCoord(0, 0, 0))
        n = geodetic_to_ned(ref, GeodeticCoord(0.001, 0, 0))
        expected = meridian_radius(0.0) * math.radians(0.001)
        assert abs(n.north - 110.574) < 0.01
        assert n.north == pytest.approx(expected, abs=1e-4)
        assert abs(n.east) < 1e-9
        assert 0.0 <= n.down < 0.01  # chord drop below the tangent plane

    def test_altitude_only(self):
        ref = GeoReference(HOME)
        n = geodetic_to_ned(ref, GeodeticCoord(HOME.latitude, HOME.longitude,
                                               10.0))
        assert n.down == pytest.approx(-10.0, abs=1e-6)
        assert abs(n.north) < 1e-6 and abs(n.east) < 1e-6

    def test_axis_signs(self):
        ref = GeoReference(HOME)
        north = geodetic_to_ned(ref, GeodeticCoord(HOME.latitude + 1e-4,
                                                   HOME.longitude, 0))
        east = geodetic_to_ned(ref, GeodeticCoord(HOME.latitude,
                                                  HOME.longitude + 1e-4, 0))
        up = geodetic_to_ned(ref, GeodeticCoord(HOME.latitude, HOME.longitude,
                                                5.0))
        assert north.north > 0 and abs(north.east) < 1e-6
        assert east.east > 0 and abs(east.north) < 0.01
        assert up.down < 0


class TestInverse:
    def test_zero_maps_to_origin(self):
        ref = GeoReference(HOME)
        g = ned_to_geodetic(ref, NedCoord(0, 0, 0))
        assert g.latitude == pytest.approx(HOME.latitude, abs=1e-12)
        assert g.longitude == pytest.approx(HOME.longitude, abs=1e-12)
        assert abs(g.altitude) < 1e-9

    def test_hundred_meters_north(self):
        ref = GeoReference(HOME)
        g = ned_to_geodetic(ref, NedCoord(100.0, 0.0, 0.0))
        arc_lat = HOME.latitude + math.degrees(100.0 / meridian_radius(HOME.latitude))
        assert g.latitude == pytest.approx(19.468372, abs=2e-6)
        assert g.latitude == pytest.approx(arc_lat, abs=1e-8)
        assert g.longitude == pytest.approx(HOME.longitude, abs=1e-7)

    def test_out_of_frame(self):
        ref = GeoReference(HOME)
        with pytest.raises(OutOfFrame):
            ned_to_geodetic(ref, NedCoord(60_000.0, 0.0, 0.0))


class TestRoundTrip:
    def test_thousand_random_points(self):
        ref = GeoReference(HOME)
        rng = np.random.default_rng(2024)
        worst_pos = 0.0
        worst_deg = 0.0
        for _ in range(1000):
            n = NedCoord(*rng.uniform(-5000, 5000, 2), rng.uniform(-100, 100))
            g = ned_to_geodetic(ref, n)
            back = geodetic_to_ned(ref, g)
            worst_pos = max(worst_pos, abs(back.north - n.north),
                            abs(back.east - n.east), abs(back.down - n.down))
            again = ned_to_geodetic(ref, back)
            worst_deg = max(worst_deg, abs(again.latitude - g.latitude),
                            abs(again.longitude - g.longitude))
        assert worst_pos < 1e-3  # 1 mm
        assert worst_deg < 1e-9

    def test_planar_distance_matches_vincenty(self):
        ref = GeoReference(HOME)
        rng = np.random.default_rng(77)
        for _ in range(20):
            n1 = NedCoord(*rng.uniform(-2500, 2500, 2), 0.0)
            n2 = NedCoord(*rng.uniform(-2500, 2500, 2), 0.0)
            g1 = ned_to_geodetic(ref, n1)
            g2 = ned_to_geodetic(ref, n2)
            planar = math.hypot(n1.north - n2.north, n1.east - n2.east)
            geodesic = vincenty_distance(
                GeodeticCoord(g1.latitude, g1.longitude, 0),
                GeodeticCoord(g2.latitude, g2.longitude, 0))
            if geodesic > 1.0:
                assert abs(planar - geodesic) / geodesic < 0.001


class TestValidation:
    def test_latitude_range(self):
        with pytest.raises(ValueError):
            GeodeticCoord(95.0, 0.0, 0.0)

    def test_longitude_range(self):
        with pytest.raises(ValueError):
            GeodeticCoord(0.0, 200.0, 0.0)
