import math

import numpy as np
import pytest

from helpers import square
from sprayplan.coverage_eval import (
    CoverageGrid,
    EvalReport,
    PathOutsideGrid,
    evaluate,
    make_grid,
    sample_polyline,
    sweep_coverage,
    uncovered_regions,
)
from sprayplan.geometry2d import Point2D, erode
from sprayplan.planner import (
    PlanParams,
    path_from_positions,
    plan_baseline,
    plan_coverage,
)

CENTER = Point2D(5.0, 5.0)


def covered_area(grid: CoverageGrid) -> float:
    return float(np.count_nonzero(grid.covered)) * grid.cell_size ** 2


class TestSweepCoverage:
    def test_stationary_disk(self):
        r = 1.5
        grid = make_grid(square(10.0), None, r, r / 50.0)
        path = path_from_positions([CENTER])
        sweep_coverage(path, r, grid)
        assert covered_area(grid) == pytest.approx(math.pi * r * r, rel=0.02)

    def test_stadium(self):
        r, length = 1.0, 10.0
        grid = make_grid(square(10.0), None, r + 2, (r + 2) / 150.0)
        path = path_from_positions([Point2D(0, 5), Point2D(length, 5)])
        sweep_coverage(path, r, grid)
        expected = 2 * r * length + math.pi * r * r
        assert covered_area(grid) == pytest.approx(expected, rel=0.02)

    def test_empty_path(self):
        grid = make_grid(square(10.0), None, 1.0, 0.1)
        path = path_from_positions([])
        sweep_coverage(path, 1.0, grid)
        assert np.count_nonzero(grid.covered) == 0

    def test_idempotent(self):
        grid = make_grid(square(10.0), None, 1.0, 0.1)
        path = path_from_positions([Point2D(2, 2), Point2D(8, 8)])
        sweep_coverage(path, 1.0, grid)
        first = grid.covered.copy()
        sweep_coverage(path, 1.0, grid)
        assert np.array_equal(first, grid.covered)

    def test_path_outside_grid(self):
        grid = make_grid(square(10.0), None, 1.0, 0.1)
        path = path_from_positions([Point2D(50, 50)])
        with pytest.raises(PathOutsideGrid):
            sweep_coverage(path, 1.0, grid)


class TestEvaluate:
    def test_plan_on_square(self):
        sq = square(10.0)
        mprime = erode(sq, 1.5)
        path = plan_coverage(sq, PlanParams(1.5, CENTER, CENTER))
        rep = evaluate(sq, mprime, path, 1.5, 2.0, 1.5 / 50.0)
        assert rep.covered_fraction_Mprime >= 0.995
        assert rep.safety_violations == 0
        assert rep.max_incursion <= 1e-6

    def test_baseline_violates(self):
        sq = square(10.0)
        mprime = erode(sq, 1.5)
        base = plan_baseline(sq, 3.0, CENTER, CENTER)
        rep = evaluate(sq, mprime, base, 1.5, 2.0, 1.5 / 50.0)
        assert rep.safety_violations > 0

    def test_baseline_covers_at_least_as_much_of_region(self):
        sq = square(10.0)
        mprime = erode(sq, 1.5)
        proposed = plan_coverage(sq, PlanParams(1.5, CENTER, CENTER))
        base = plan_baseline(sq, 3.0, CENTER, CENTER)
        rp = evaluate(sq, mprime, proposed, 1.5, 2.0, 1.5 / 50.0)
        rb = evaluate(sq, mprime, base, 1.5, 2.0, 1.5 / 50.0)
        assert rb.covered_fraction_M >= rp.covered_fraction_M

    def test_flight_time_arithmetic(self):
        path = path_from_positions([Point2D(2, 2), Point2D(2, 122)])
        sq = square(200.0)
        rep = evaluate(sq, erode(sq, 1.0), path, 1.0, 2.0, 0.5)
        assert rep.path_length == 120.0
        assert rep.est_flight_time == 60.0
        assert rep.est_flight_time * 2.0 == rep.path_length

    def test_invalid_speed(self):
        sq = square(10.0)
        with pytest.raises(ValueError):
            evaluate(sq, erode(sq, 1.0), path_from_positions([CENTER]),
                     1.0, 0.0, 0.1)


class TestMonotonicityAndConvergence:
    def test_more_waypoints_never_reduce_coverage(self):
        sq = square(10.0)
        mprime = erode(sq, 1.0)
        pts = [Point2D(2, 2), Point2D(8, 2), Point2D(8, 5)]
        fractions = []
        for k in range(1, len(pts) + 1):
            rep = evaluate(sq, mprime, path_from_positions(pts[:k]),
                           1.0, 2.0, 0.05)
            fractions.append(rep.covered_fraction_M)
        assert fractions == sorted(fractions)

    def test_resolution_convergence(self):
        sq = square(10.0)
        mprime = erode(sq, 1.5)
        path = plan_coverage(sq, PlanParams(1.5, CENTER, CENTER))
        coarse = evaluate(sq, mprime, path, 1.5, 2.0, 1.5 / 50.0)
        fine = evaluate(sq, mprime, path, 1.5, 2.0, 1.5 / 100.0)
        assert abs(fine.covered_fraction_M - coarse.covered_fraction_M) < 0.005
        assert abs(fine.covered_fraction_Mprime
                   - coarse.covered_fraction_Mprime) < 0.005


class TestUncovered:
    def _grid_after(self, path, r=1.5):
        sq = square(10.0)
        grid = make_grid(sq, erode(sq, r), r, r / 50.0)
        sweep_coverage(path, r, grid)
        return sq, grid

    def test_uncovered_confined_to_boundary_band(self):
        path = plan_coverage(square(10.0), PlanParams(1.5, CENTER, CENTER))
        sq, grid = self._grid_after(path)
        summary = uncovered_regions(sq, grid, 1.5)
        assert summary.max_distance_to_boundary < 1.5

    def test_ablation_uncovers_more(self):
        with_tour = plan_coverage(square(10.0), PlanParams(1.5, CENTER, CENTER))
        without = plan_coverage(square(10.0), PlanParams(1.5, CENTER, CENTER),
                                include_corner_tour=False)
        _, grid_with = self._grid_after(with_tour)
        sq, grid_without = self._grid_after(without)
        missed_with = uncovered_regions(sq, grid_with, 1.5).count
        missed_without = uncovered_regions(sq, grid_without, 1.5).count
        assert missed_without > missed_with

    def test_inner_region_fully_covered_means_band_only(self):
        path = plan_coverage(square(10.0), PlanParams(1.5, CENTER, CENTER))
        sq, grid = self._grid_after(path)
        # M' fully covered => no uncovered cell deeper than r + cell
        inner_missed = np.logical_and(grid.inner_mask,
                                      np.logical_not(grid.covered))
        assert np.count_nonzero(inner_missed) == 0
        summary = uncovered_regions(sq, grid, 1.5)
        assert summary.max_distance_to_boundary < 1.5 + grid.cell_size


class TestSamplePolyline:
    def test_spacing_and_endpoints(self):
        pts = [Point2D(0, 0), Point2D(1, 0), Point2D(1, 2)]
        samples = sample_polyline(pts, 0.01)
        assert np.allclose(samples[0], [0, 0])
        assert np.allclose(samples[-1], [1, 2])
        gaps = np.hypot(np.diff(samples[:, 0]), np.diff(samples[:, 1]))
        assert gaps.max() <= 0.01 + 1e-12

    def test_single_point(self):
        samples = sample_polyline([Point2D(3, 4)], 0.01)
        assert samples.shape == (1, 2)


def test_report_fields():
    rep = EvalReport(0.5, 0.9, 10.0, 5.0, 0, 0.0)
    assert rep.covered_fraction_M == 0.5
    assert rep.safety_violations == 0
