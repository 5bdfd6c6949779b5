"""NumPy implementation of the raster/audit kernels.

Mirrors the compiled module ``_core`` operation for operation. The
arithmetic (expressions and evaluation order) is kept identical so both
backends produce bit-equal results; keep the two files in sync.
"""

from __future__ import annotations

import math

import numpy as np


def polygon_mask(out, x0, y0, cell, vx, vy, tol):
    """Mark cells whose center lies in the CCW convex polygon (vx, vy).

    ``out`` is a (ny, nx) uint8 array; cell centers are at
    (x0 + (i + 0.5) * cell, y0 + (j + 0.5) * cell).
    """
    ny, nx = out.shape
    cx = x0 + (np.arange(nx, dtype=np.float64) + 0.5) * cell
    cy = y0 + (np.arange(ny, dtype=np.float64) + 0.5) * cell
    X = cx[None, :]
    Y = cy[:, None]
    k = len(vx)
    inside = np.ones((ny, nx), dtype=bool)
    for m in range(k):
        ax, ay = vx[m], vy[m]
        bx, by = vx[(m + 1) % k], vy[(m + 1) % k]
        ex, ey = bx - ax, by - ay
        elen = math.sqrt(ex * ex + ey * ey)
        inside &= (ex * (Y - ay) - ey * (X - ax)) >= -tol * elen
    out[:, :] = inside


def _capsule_index_box(lo, hi, r, origin, cell, ncells):
    i0 = int(math.floor((lo - r - origin) / cell - 0.5)) - 1
    i1 = int(math.ceil((hi + r - origin) / cell - 0.5)) + 1
    return max(i0, 0), min(i1, ncells - 1)


def mark_capsule(out, x0, y0, cell, ax, ay, bx, by, r):
    """Mark cells whose center is within r of segment (a, b)."""
    ny, nx = out.shape
    i0, i1 = _capsule_index_box(min(ax, bx), max(ax, bx), r, x0, cell, nx)
    j0, j1 = _capsule_index_box(min(ay, by), max(ay, by), r, y0, cell, ny)
    if i0 > i1 or j0 > j1:
        return
    cx = x0 + (np.arange(i0, i1 + 1, dtype=np.float64) + 0.5) * cell
    cy = y0 + (np.arange(j0, j1 + 1, dtype=np.float64) + 0.5) * cell
    ux, uy = bx - ax, by - ay
    l2 = ux * ux + uy * uy
    wx = cx[None, :] - ax
    wy = cy[:, None] - ay
    if l2 > 0.0:
        t = np.clip((wx * ux + wy * uy) / l2, 0.0, 1.0)
    else:
        t = 0.0
    dx = wx - t * ux
    dy = wy - t * uy
    hit = dx * dx + dy * dy <= r * r
    view = out[j0:j1 + 1, i0:i1 + 1]
    view[hit] = 1


def signed_distance_batch(px, py, vx, vy):
    """Signed distance to the polygon boundary for each point.

    Positive inside, negative outside, magnitude = distance to the
    nearest edge segment. Polygon is CCW.
    """
    px = np.asarray(px, dtype=np.float64)
    py = np.asarray(py, dtype=np.float64)
    k = len(vx)
    inside = np.ones(px.shape, dtype=bool)
    best2 = np.full(px.shape, np.inf)
    for m in range(k):
        ax, ay = vx[m], vy[m]
        bx, by = vx[(m + 1) % k], vy[(m + 1) % k]
        ux, uy = bx - ax, by - ay
        wx = px - ax
        wy = py - ay
        inside &= (ux * wy - uy * wx) >= 0.0
        l2 = ux * ux + uy * uy
        t = np.clip((wx * ux + wy * uy) / l2, 0.0, 1.0)
        dx = wx - t * ux
        dy = wy - t * uy
        d2 = dx * dx + dy * dy
        np.minimum(best2, d2, out=best2)
    dist = np.sqrt(best2)
    return np.where(inside, dist, -dist)
