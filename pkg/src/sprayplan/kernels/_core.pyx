# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled raster/audit kernels.

Mirrors ``_core_py`` operation for operation; the arithmetic must stay
identical so both backends produce bit-equal results (the extension is
built with -ffp-contract=off for exactly that reason).
"""

import numpy as np

from libc.math cimport INFINITY, ceil, floor, sqrt


def polygon_mask(unsigned char[:, ::1] out, double x0, double y0, double cell,
                 double[::1] vx, double[::1] vy, double tol):
    """Mark cells whose center lies in the CCW convex polygon (vx, vy)."""
    cdef Py_ssize_t ny = out.shape[0]
    cdef Py_ssize_t nx = out.shape[1]
    cdef Py_ssize_t k = vx.shape[0]
    cdef Py_ssize_t i, j, m
    cdef double cx, cy
    edges = np.empty((k, 5), dtype=np.float64)
    cdef double[:, ::1] e = edges
    cdef double ax, ay, bx, by, ex, ey
    for m in range(k):
        ax = vx[m]; ay = vy[m]
        bx = vx[(m + 1) % k]; by = vy[(m + 1) % k]
        ex = bx - ax; ey = by - ay
        e[m, 0] = ax; e[m, 1] = ay; e[m, 2] = ex; e[m, 3] = ey
        e[m, 4] = -tol * sqrt(ex * ex + ey * ey)
    cdef int inside
    for j in range(ny):
        cy = y0 + (j + 0.5) * cell
        for i in range(nx):
            cx = x0 + (i + 0.5) * cell
            inside = 1
            for m in range(k):
                if e[m, 2] * (cy - e[m, 1]) - e[m, 3] * (cx - e[m, 0]) < e[m, 4]:
                    inside = 0
                    break
            out[j, i] = inside


cdef inline Py_ssize_t _clampi(Py_ssize_t v, Py_ssize_t lo, Py_ssize_t hi):
    if v < lo:
        return lo
    if v > hi:
        return hi
    return v


def mark_capsule(unsigned char[:, ::1] out, double x0, double y0, double cell,
                 double ax, double ay, double bx, double by, double r):
    """Mark cells whose center is within r of segment (a, b)."""
    cdef Py_ssize_t ny = out.shape[0]
    cdef Py_ssize_t nx = out.shape[1]
    cdef double xlo = ax if ax < bx else bx
    cdef double xhi = ax if ax > bx else bx
    cdef double ylo = ay if ay < by else by
    cdef double yhi = ay if ay > by else by
    cdef Py_ssize_t i0 = _clampi(<Py_ssize_t>floor((xlo - r - x0) / cell - 0.5) - 1, 0, nx - 1)
    cdef Py_ssize_t i1 = _clampi(<Py_ssize_t>ceil((xhi + r - x0) / cell - 0.5) + 1, 0, nx - 1)
    cdef Py_ssize_t j0 = _clampi(<Py_ssize_t>floor((ylo - r - y0) / cell - 0.5) - 1, 0, ny - 1)
    cdef Py_ssize_t j1 = _clampi(<Py_ssize_t>ceil((yhi + r - y0) / cell - 0.5) + 1, 0, ny - 1)
    cdef double ux = bx - ax
    cdef double uy = by - ay
    cdef double l2 = ux * ux + uy * uy
    cdef double r2 = r * r
    cdef Py_ssize_t i, j
    cdef double wx, wy, t, dx, dy
    for j in range(j0, j1 + 1):
        wy = y0 + (j + 0.5) * cell - ay
        for i in range(i0, i1 + 1):
            wx = x0 + (i + 0.5) * cell - ax
            if l2 > 0.0:
                t = (wx * ux + wy * uy) / l2
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
            else:
                t = 0.0
            dx = wx - t * ux
            dy = wy - t * uy
            if dx * dx + dy * dy <= r2:
                out[j, i] = 1


def signed_distance_batch(px, py, double[::1] vx, double[::1] vy):
    """Signed distance to the polygon boundary for each point."""
    px_arr = np.ascontiguousarray(px, dtype=np.float64)
    py_arr = np.ascontiguousarray(py, dtype=np.float64)
    out_arr = np.empty(px_arr.shape, dtype=np.float64)
    cdef double[::1] x = px_arr.ravel()
    cdef double[::1] y = py_arr.ravel()
    cdef double[::1] o = out_arr.ravel()
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t k = vx.shape[0]
    cdef Py_ssize_t p, m
    cdef double ax, ay, ux, uy, l2, wx, wy, t, dx, dy, d2, best2
    cdef int inside
    for p in range(n):
        best2 = INFINITY
        inside = 1
        for m in range(k):
            ax = vx[m]; ay = vy[m]
            ux = vx[(m + 1) % k] - ax
            uy = vy[(m + 1) % k] - ay
            wx = x[p] - ax
            wy = y[p] - ay
            if ux * wy - uy * wx < 0.0:
                inside = 0
            l2 = ux * ux + uy * uy
            t = (wx * ux + wy * uy) / l2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            dx = wx - t * ux
            dy = wy - t * uy
            d2 = dx * dx + dy * dy
            if d2 < best2:
                best2 = d2
        o[p] = sqrt(best2) if inside else -sqrt(best2)
    return out_arr
