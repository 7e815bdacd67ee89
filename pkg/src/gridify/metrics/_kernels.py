"""Numba kernels for the Hausdorff box bounds."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _seg_dist(px, py, x0, y0, x1, y1):
    dx = x1 - x0
    dy = y1 - y0
    den = dx * dx + dy * dy
    t = 0.0
    if den > 0:
        t = ((px - x0) * dx + (py - y0) * dy) / den
        if t < 0:
            t = 0.0
        elif t > 1:
            t = 1.0
    ex = x0 + t * dx - px
    ey = y0 + t * dy - py
    return np.sqrt(ex * ex + ey * ey)


@njit(cache=True)
def _triangle_bound(vals, k):
    """max over the simplex of min_s (lambda . vals[s]), vals shape (k, 3)."""
    best = -1.0
    # vertices
    for i in range(3):
        m = np.inf
        for s in range(k):
            m = min(m, vals[s, i])
        best = max(best, m)
    lam = np.empty(3)
    for s in range(k):
        for u in range(s + 1, k):
            # crossings of A_s = A_u along the three edges
            for i in range(3):
                j = (i + 1) % 3
                di = vals[s, i] - vals[u, i]
                dj = vals[s, j] - vals[u, j]
                if di == dj:
                    continue
                t = di / (di - dj)
                if 0.0 < t < 1.0:
                    m = np.inf
                    for w in range(k):
                        m = min(m, (1 - t) * vals[w, i] + t * vals[w, j])
                    best = max(best, m)
            for v in range(u + 1, k):
                # A_s = A_u = A_v inside: solve a 3x3 system by Cramer's rule
                a0 = vals[s, 0] - vals[u, 0]
                a1 = vals[s, 1] - vals[u, 1]
                a2 = vals[s, 2] - vals[u, 2]
                b0 = vals[s, 0] - vals[v, 0]
                b1 = vals[s, 1] - vals[v, 1]
                b2 = vals[s, 2] - vals[v, 2]
                det = a0 * (b1 - b2) - a1 * (b0 - b2) + a2 * (b0 - b1)
                if abs(det) < 1e-15:
                    continue
                lam[0] = (a1 * b2 - a2 * b1) / det
                lam[1] = (a2 * b0 - a0 * b2) / det
                lam[2] = (a0 * b1 - a1 * b0) / det
                if lam[0] < 0 or lam[1] < 0 or lam[2] < 0:
                    continue
                m = np.inf
                for w in range(k):
                    m = min(m, lam[0] * vals[w, 0] + lam[1] * vals[w, 1] + lam[2] * vals[w, 2])
                best = max(best, m)
    return best


@njit(cache=True)
def box_upper_bounds(centres, half, segs, kmax):
    """Upper bound on the distance to the segment set over each box.

    Distance to one segment is convex, so on a triangle it lies below the
    affine interpolation of its corner values; the minimum over the nearest
    ``kmax`` segments of these interpolants is concave and its maximum over
    the triangle is found by enumerating the vertices of the arrangement.
    Each box is split into two triangles.
    """
    n = centres.shape[0]
    m = segs.shape[0]
    k = min(kmax, m)
    out = np.empty(n)
    cd = np.empty(m)
    idx = np.empty(k, dtype=np.int64)
    cx = np.empty(4)
    cy = np.empty(4)
    vals = np.empty((k, 3))
    for b in range(n):
        px = centres[b, 0]
        py = centres[b, 1]
        for s in range(m):
            cd[s] = _seg_dist(px, py, segs[s, 0], segs[s, 1], segs[s, 2], segs[s, 3])
        order = np.argsort(cd)
        for t in range(k):
            idx[t] = order[t]
        cx[0] = px - half
        cy[0] = py - half
        cx[1] = px + half
        cy[1] = py - half
        cx[2] = px + half
        cy[2] = py + half
        cx[3] = px - half
        cy[3] = py + half
        corner = np.empty((k, 4))
        for t in range(k):
            s = idx[t]
            for c in range(4):
                corner[t, c] = _seg_dist(cx[c], cy[c], segs[s, 0], segs[s, 1], segs[s, 2], segs[s, 3])
        for t in range(k):
            vals[t, 0] = corner[t, 0]
            vals[t, 1] = corner[t, 1]
            vals[t, 2] = corner[t, 2]
        ub1 = _triangle_bound(vals, k)
        for t in range(k):
            vals[t, 0] = corner[t, 0]
            vals[t, 1] = corner[t, 2]
            vals[t, 2] = corner[t, 3]
        ub2 = _triangle_bound(vals, k)
        out[b] = max(ub1, ub2)
    return out
