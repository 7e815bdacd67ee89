"""Fréchet distance between closed polygonal curves.

Decision procedure on the free-space diagram with the second curve doubled.
Curve ``a`` is pinned to start at its first vertex; the start on ``b`` is any
point of a free interval on the left boundary.  For a start row the set of
reachable points is monotone in the start height, so it suffices to try the
finitely many start heights at which the set of seeds (top edges of the start
row reachable from the left) changes.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ..geometry import merge_collinear
from .hausdorff import DistanceResult, _check_tol


def _as_closed_vertices(x) -> np.ndarray:
    from ..geometry import Polygon
    from ..grid import GridCycle

    if isinstance(x, Polygon):
        return x.xy
    if isinstance(x, GridCycle):
        return merge_collinear(x.xy)
    xy = np.asarray(x, dtype=float)
    if len(xy) > 1 and np.all(xy[0] == xy[-1]):
        xy = xy[:-1]
    if len(xy) < 2:
        raise ValueError("closed curve needs at least 2 vertices")
    return xy


def _free_intervals(pts: np.ndarray, seg0: np.ndarray, seg1: np.ndarray, eps: float):
    """Parameter intervals on each segment within ``eps`` of each point.

    ``pts`` has shape (n, 2), the segments (m, 2); returns (lo, hi) arrays of
    shape (n, m) with lo > hi marking an empty interval.
    """
    d = (seg1 - seg0)[None, :, :]
    w = seg0[None, :, :] - pts[:, None, :]
    a = (d * d).sum(axis=2)
    b = 2 * (d * w).sum(axis=2)
    c = (w * w).sum(axis=2) - eps * eps
    disc = b * b - 4 * a * c
    with np.errstate(invalid="ignore", divide="ignore"):
        root = np.sqrt(np.maximum(disc, 0.0))
        lo = (-b - root) / (2 * a)
        hi = (-b + root) / (2 * a)
    lo = np.maximum(lo, 0.0)
    hi = np.minimum(hi, 1.0)
    empty = (disc < 0) | (lo > hi)
    zero = a == 0
    lo = np.where(zero, np.where(c <= 0, 0.0, 1.0), lo)
    hi = np.where(zero, np.where(c <= 0, 1.0, 0.0), hi)
    empty = np.where(zero, c > 0, empty)
    lo = np.where(empty, 1.0, lo)
    hi = np.where(empty, 0.0, hi)
    return lo, hi


@njit(cache=True)
def _reach_target(LFlo, LFhi, BFlo, BFhi, j0, kmax):
    """Lowest reachable height on the target edge, seeding top edges 0..kmax."""
    n, m = LFlo.shape
    inf = np.inf
    bx = np.full(n, inf)
    row1 = (j0 + 1) % m
    for i in range(kmax + 1):
        if BFlo[i, row1] <= BFhi[i, row1]:
            bx[i] = BFlo[i, row1]
    ly = inf
    for step in range(1, m + 1):
        j = (j0 + step) % m
        jt = (j0 + step + 1) % m
        ly = inf
        alive = False
        for i in range(n):
            b = bx[i]
            ii = (i + 1) % n
            rlo = LFlo[ii, j]
            rhi = LFhi[ii, j]
            r = inf
            if rlo <= rhi:
                if b < inf:
                    r = rlo
                elif ly < inf:
                    cand = max(ly, rlo)
                    if cand <= rhi:
                        r = cand
            tlo = BFlo[i, jt]
            thi = BFhi[i, jt]
            t = inf
            if tlo <= thi:
                if ly < inf:
                    t = tlo
                elif b < inf:
                    cand = max(b, tlo)
                    if cand <= thi:
                        t = cand
            bx[i] = t
            ly = r
            if t < inf or r < inf:
                alive = True
        if not alive:
            return inf
    return ly


@njit(cache=True)
def _decide(LFlo, LFhi, BFlo, BFhi):
    n, m = LFlo.shape
    budget = np.empty(n)
    for j0 in range(m):
        slo = LFlo[0, j0]
        shi = LFhi[0, j0]
        if slo > shi:
            continue
        # start heights for which the top edge of cell k in the start row is
        # reachable form a prefix [slo, budget[k]]
        budget[0] = shi
        k = 1
        runlo = slo
        tau = shi
        while k < n:
            lo = LFlo[k, j0]
            hi = LFhi[k, j0]
            if lo > hi:
                break
            runlo = max(runlo, lo)
            if runlo > hi:
                break
            tau = min(tau, hi)
            budget[k] = tau
            k += 1
        kmax = k - 1
        rho = _reach_target(LFlo, LFhi, BFlo, BFhi, j0, kmax)
        if rho > shi:
            continue
        if rho <= budget[kmax]:
            return True
        # larger start heights leave fewer seeds; try each distinct budget
        kk = 0
        while kk < kmax:
            t = budget[kk]
            while kk + 1 <= kmax and budget[kk + 1] >= t:
                kk += 1
            if kk == kmax:
                break
            if _reach_target(LFlo, LFhi, BFlo, BFhi, j0, kk) <= t:
                return True
            kk += 1
    return False


def frechet_decide(a: np.ndarray, b: np.ndarray, eps: float) -> bool:
    """Whether the closed-curve Fréchet distance of ``a`` and ``b`` is ≤ ``eps``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a1 = np.roll(a, -1, axis=0)
    b1 = np.roll(b, -1, axis=0)
    LFlo, LFhi = _free_intervals(a, b, b1, eps)
    BFlo, BFhi = _free_intervals(b, a, a1, eps)
    return bool(_decide(LFlo, LFhi, BFlo.T.copy(), BFhi.T.copy()))


def _vertex_lower_bound(a: np.ndarray, b: np.ndarray) -> float:
    from ..geometry import closed_segments, distance_to_segments

    da = distance_to_segments(a, closed_segments(b)).max()
    db = distance_to_segments(b, closed_segments(a)).max()
    return float(max(da, db))


def frechet_closed(a, b, tol: float = 1e-4) -> DistanceResult:
    """Closed-curve Fréchet distance, certified to within ``tol``."""
    _check_tol(tol)
    A = _as_closed_vertices(a)
    B = _as_closed_vertices(b)
    allpts = np.vstack([A, B])
    span = allpts.max(axis=0) - allpts.min(axis=0)
    lo = _vertex_lower_bound(A, B)
    hi = float(np.hypot(*span)) * (1 + 1e-9) + 1e-12
    hi = max(hi, lo)
    if frechet_decide(A, B, lo):
        return DistanceResult(lo, 0.0)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if frechet_decide(A, B, mid):
            hi = mid
        else:
            lo = mid
    # lo is infeasible and hi feasible, so the distance lies in [lo, hi]
    return DistanceResult(lo, hi - lo)
