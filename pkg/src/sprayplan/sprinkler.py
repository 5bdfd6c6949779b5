"""Paraboloid spray model.

The sprinkler's coverage volume is bounded by a downward paraboloid
``z = -cx*x^2 - cy*y^2 + altitude``; its intersection with the ground is
an ellipse, and the planner uses the largest circle inscribed in that
ellipse as the ground footprint. Model parameters are fitted from
observed droplet points with damped least squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry2d import Point2D


class NotIdentifiable(ValueError):
    """The sample design does not determine all three parameters."""


class NonPositiveFit(ValueError):
    """The least-squares optimum is not a valid downward paraboloid."""

    def __init__(self, message: str, params: tuple[float, float, float]):
        super().__init__(message)
        self.params = params


@dataclass(frozen=True)
class Paraboloid:
    """Spray-volume model: curvatures in 1/m, altitude in m."""

    curvature_x: float
    curvature_y: float
    altitude: float

    def __post_init__(self):
        if not (self.curvature_x > 0 and self.curvature_y > 0 and self.altitude > 0):
            raise ValueError("curvatures and altitude must be positive")


@dataclass(frozen=True)
class NoiseModel:
    """Vertical perturbation of the spray surface: zero-mean normal."""

    sigma: float

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError("sigma must be non-negative")


@dataclass(frozen=True)
class DropletSample:
    """An observed point on the spray boundary surface."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.x, self.y, self.z))):
            raise ValueError("droplet coordinates must be finite")


@dataclass(frozen=True)
class FootprintDisk:
    """Circular ground footprint of the sprinkler."""

    center: Point2D
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class FitResult:
    model: Paraboloid
    residual_rms: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class FitConfig:
    max_iterations: int = 100
    gradient_tolerance: float = 1e-8
    initial_damping: float = 1e-3


def evaluate(m: Paraboloid, x, y):
    """Surface height above ground at (x, y); accepts scalars or arrays."""
    return -m.curvature_x * x * x - m.curvature_y * y * y + m.altitude


def sample_noisy(m: Paraboloid, n: NoiseModel, x, y, rng: np.random.Generator):
    """Noisy surface sample: evaluate() plus Normal(0, sigma) vertical error."""
    return evaluate(m, x, y) + rng.normal(0.0, n.sigma, size=np.shape(x) or None)


def levenberg_marquardt(residual_fn, jacobian_fn, x0: np.ndarray,
                        config: FitConfig = FitConfig()):
    """Minimize ||residual(x)||^2 by damped Gauss-Newton steps.

    The damping factor is divided by 10 after an accepted step and
    multiplied by 10 after a rejected one. Stops when the largest
    gradient component falls below ``gradient_tolerance`` or the
    relative cost decrease of an accepted step drops below 1e-12.

    Returns (x, iterations, converged).
    """
    x = np.asarray(x0, dtype=np.float64).copy()
    lam = config.initial_damping
    r = residual_fn(x)
    cost = float(r @ r)
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        jac = jacobian_fn(x)
        grad = jac.T @ r
        if np.max(np.abs(grad)) < config.gradient_tolerance:
            converged = True
            iterations -= 1
            break
        hess = jac.T @ jac
        try:
            step = np.linalg.solve(hess + lam * np.eye(len(x)), -grad)
        except np.linalg.LinAlgError:
            lam = min(lam * 10.0, 1e15)
            continue
        x_new = x + step
        r_new = residual_fn(x_new)
        cost_new = float(r_new @ r_new)
        if cost_new < cost:
            rel_decrease = (cost - cost_new) / max(cost, 1e-300)
            x, r, cost = x_new, r_new, cost_new
            lam = max(lam / 10.0, 1e-15)
            if rel_decrease < 1e-12:
                converged = True
                break
        else:
            lam = min(lam * 10.0, 1e15)
    return x, iterations, converged


def _design_matrix(samples: list[DropletSample]) -> tuple[np.ndarray, np.ndarray]:
    xs = np.array([s.x for s in samples])
    ys = np.array([s.y for s in samples])
    zs = np.array([s.z for s in samples])
    design = np.column_stack([-xs * xs, -ys * ys, np.ones_like(xs)])
    return design, zs


def fit(samples: list[DropletSample], initial: Paraboloid | None = None,
        config: FitConfig = FitConfig()) -> FitResult:
    """Fit paraboloid parameters to droplet observations.

    Minimizes the sum of squared vertical residuals over (curvature_x,
    curvature_y, altitude). The residual is linear in the parameters, so
    the result must coincide with the linear least-squares solution; the
    damped iteration is kept generic for future non-linear models.
    """
    if len(samples) < 3:
        raise NotIdentifiable(f"need at least 3 samples, got {len(samples)}")
    design, zs = _design_matrix(samples)
    if np.linalg.matrix_rank(design) < 3:
        raise NotIdentifiable(
            "samples must span 3 independent (x^2, y^2) combinations")

    def residual(theta):
        return design @ theta - zs

    def jacobian(theta):
        return design

    if initial is None:
        x0, *_ = np.linalg.lstsq(design, zs, rcond=None)
    else:
        x0 = np.array([initial.curvature_x, initial.curvature_y,
                       initial.altitude])
    theta, iterations, converged = levenberg_marquardt(
        residual, jacobian, x0, config)
    cx, cy, alt = (float(v) for v in theta)
    if cx <= 0 or cy <= 0 or alt <= 0:
        raise NonPositiveFit(
            f"optimum (curvature_x={cx:.6g}, curvature_y={cy:.6g}, "
            f"altitude={alt:.6g}) is not a downward paraboloid",
            (cx, cy, alt))
    res = residual(theta)
    rms = float(np.sqrt(np.mean(res * res)))
    return FitResult(Paraboloid(cx, cy, alt), rms, iterations, converged)


def footprint(m: Paraboloid) -> FootprintDisk:
    """Largest circle inscribed in the ground intersection ellipse.

    The ellipse has semi-axes sqrt(altitude/curvature); the inscribed
    circle radius is governed by the larger curvature. Centered at the
    vehicle's ground projection.
    """
    return FootprintDisk(Point2D(0.0, 0.0),
                         footprint_radius_from_altitude(m, m.altitude))


def footprint_radius_from_altitude(m: Paraboloid, new_altitude: float) -> float:
    """Footprint radius at a different flight altitude, curvatures fixed."""
    if not new_altitude > 0:
        raise ValueError("altitude must be positive")
    return math.sqrt(new_altitude / max(m.curvature_x, m.curvature_y))
