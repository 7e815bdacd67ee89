"""Certified directed Hausdorff distances between boundaries and regions.

Both routines are branch-and-bound searches over the distance to the
boundary segments of the target.  Two upper bounds are combined: the
distance is 1-Lipschitz, and the distance to any single segment is convex,
so it never exceeds the interpolation of its values at the corners of a
piece or triangle.  The convexity bound is exact on ridges where the
distance stays constant, which the Lipschitz bound alone would have to
refine down to the tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import Polygon, closed_segments, distance_to_segments, merge_collinear
from ..grid import GridCycle, boundary_segments, to_mask
from ._kernels import box_upper_bounds

_NEAREST = 6


@dataclass(frozen=True)
class DistanceResult:
    """The true distance lies in ``[value, value + error_bound]``."""

    value: float
    error_bound: float

    @property
    def upper(self) -> float:
        """Certified upper bound on the true distance."""
        return self.value + self.error_bound

    def __float__(self) -> float:
        return self.value


class _Shape:
    """Boundary segments plus a vectorised membership test."""

    def __init__(self, segs: np.ndarray, contains, bbox):
        self.segs = segs
        self.contains = contains
        self.bbox = bbox


def _merge_unit_edges(segs: np.ndarray) -> np.ndarray:
    """Join collinear touching axis-parallel edges into maximal runs."""
    out = []
    for axis in (0, 1):
        fixed_axis = 1 - axis
        sel = segs[segs[:, fixed_axis] == segs[:, fixed_axis + 2]]
        lo = np.minimum(sel[:, axis], sel[:, axis + 2])
        hi = np.maximum(sel[:, axis], sel[:, axis + 2])
        fixed = sel[:, fixed_axis]
        runs = []
        for k in np.lexsort((lo, fixed)):
            if runs and runs[-1][0] == fixed[k] and lo[k] <= runs[-1][2]:
                runs[-1][2] = max(runs[-1][2], hi[k])
            else:
                runs.append([fixed[k], lo[k], hi[k]])
        for f, a, b in runs:
            out.append((a, f, b, f) if axis == 0 else (f, a, f, b))
    return np.array(out, dtype=float).reshape(-1, 4)


def _cells_shape(cells) -> _Shape:
    cells = frozenset(cells)
    mask, col0, row0 = to_mask(cells, pad=1)
    segs = _merge_unit_edges(boundary_segments(cells))

    def contains(pts):
        pts = np.atleast_2d(pts)
        i = np.floor(pts[:, 0]).astype(int) - col0
        j = np.floor(pts[:, 1]).astype(int) - row0
        ok = (i >= 0) & (i < mask.shape[0]) & (j >= 0) & (j < mask.shape[1])
        out = np.zeros(len(pts), dtype=bool)
        out[ok] = mask[i[ok], j[ok]]
        return out

    arr = np.array(sorted(cells), dtype=float)
    bbox = (arr[:, 0].min(), arr[:, 1].min(), arr[:, 0].max() + 1, arr[:, 1].max() + 1)
    return _Shape(segs, contains, bbox)


def _as_shape(x) -> _Shape:
    if isinstance(x, _Shape):
        return x
    if isinstance(x, Polygon):
        return _Shape(x.edges, x.contains, x.bbox)
    if isinstance(x, GridCycle):
        x = x.cells()
    if isinstance(x, (set, frozenset)):
        if not x:
            raise ValueError("empty cell set")
        return _cells_shape(x)
    xy = np.asarray(x, dtype=float)
    poly = Polygon(xy, validate=False)
    return _Shape(poly.edges, poly.contains, poly.bbox)


def as_segments(x) -> np.ndarray:
    """Boundary of a polygon / grid cycle / cell set / closed vertex list."""
    if isinstance(x, Polygon):
        return x.edges
    if isinstance(x, GridCycle):
        return closed_segments(merge_collinear(x.xy))
    if isinstance(x, (set, frozenset)):
        return _merge_unit_edges(boundary_segments(x))
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 4:
        return arr
    return closed_segments(arr)


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise ValueError("tolerance must be positive")


def _seg_distances(pts: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """Distances from every point to every segment, shape (len(pts), len(segs))."""
    p = pts[:, None, :]
    a = segs[None, :, :2]
    d = segs[None, :, 2:] - a
    den = (d * d).sum(-1)
    t = np.where(den > 0, ((p - a) * d).sum(-1) / np.where(den > 0, den, 1.0), 0.0)
    e = a + np.clip(t, 0.0, 1.0)[..., None] * d - p
    return np.hypot(e[..., 0], e[..., 1])


def _curve_max(segs: np.ndarray, target: np.ndarray, contains, tol: float) -> DistanceResult:
    """Maximum over the segments ``segs`` of the distance to ``target``.

    Points where ``contains`` holds count as distance zero (pass None for
    plain curve-to-curve distance).
    """
    def evaluate(pts):
        D = _seg_distances(pts, target)
        f = D.min(axis=1)
        inside = np.zeros(len(pts), dtype=bool) if contains is None else contains(pts)
        # distance to the target's boundary for inside points, else -1
        depth = np.where(inside, f, -1.0)
        f[inside] = 0.0
        return D, f, depth

    p0 = segs[:, :2].copy()
    p1 = segs[:, 2:].copy()
    D0, f0, e0 = evaluate(p0)
    D1, f1, e1 = evaluate(p1)
    lb = float(max(f0.max(), f1.max()))
    ub_done = lb
    while len(p0):
        L = np.hypot(*(p1 - p0).T)
        ub = np.minimum((f0 + f1 + L) / 2, np.maximum(D0, D1).min(axis=1))
        # a piece within an endpoint's inside-disk lies inside the target
        ub[(e0 >= L) | (e1 >= L)] = 0.0
        keep = ub > lb + tol
        if np.any(~keep):
            ub_done = max(ub_done, float(ub[~keep].max()))
        if not np.any(keep):
            break
        p0, p1, f0, f1, D0, D1 = p0[keep], p1[keep], f0[keep], f1[keep], D0[keep], D1[keep]
        e0, e1 = e0[keep], e1[keep]
        mid = (p0 + p1) / 2
        Dm, fm, em = evaluate(mid)
        lb = max(lb, float(fm.max()))
        p0, p1 = np.vstack([p0, mid]), np.vstack([mid, p1])
        f0, f1 = np.concatenate([f0, fm]), np.concatenate([fm, f1])
        D0, D1 = np.vstack([D0, Dm]), np.vstack([Dm, D1])
        e0, e1 = np.concatenate([e0, em]), np.concatenate([em, e1])
    return DistanceResult(lb, max(0.0, ub_done - lb))


def hausdorff_boundary(a, b, tol: float = 1e-4) -> DistanceResult:
    """Directed Hausdorff distance from boundary curve ``a`` to boundary ``b``."""
    _check_tol(tol)
    sa = as_segments(a)
    sb = as_segments(b)
    return _curve_max(sa, sb, None, tol)


def hausdorff_boundary_undirected(a, b, tol: float = 1e-4) -> DistanceResult:
    r1 = hausdorff_boundary(a, b, tol)
    r2 = hausdorff_boundary(b, a, tol)
    return r1 if r1.value >= r2.value else r2


def hausdorff_region(x, y, tol: float = 1e-4) -> DistanceResult:
    """Directed Hausdorff distance from region ``x`` to region ``y``.

    Regions are polygons, cell sets or grid cycles.  The boundary of ``x`` is
    handled by the curve search; the interior by a quadtree over the bounding
    box of ``x``, where boxes are discarded once their upper bound cannot beat the best value found so far by more than ``tol``.
    """
    _check_tol(tol)
    X = _as_shape(x)
    Y = _as_shape(y)

    def g(pts):
        """Distance to y, and the depth inside y (-1 outside)."""
        d = distance_to_segments(pts, Y.segs)
        inside = Y.contains(pts)
        depth = np.where(inside, d, -1.0)
        d[inside] = 0.0
        return d, depth

    edge = _curve_max(X.segs, Y.segs, Y.contains, tol / 2)
    lb = edge.value
    edge_ub = edge.upper
    ub_done = edge_ub

    x0, y0, x1, y1 = X.bbox
    size = 1.0
    nx = max(1, int(np.ceil((x1 - x0) / size)))
    ny = max(1, int(np.ceil((y1 - y0) / size)))
    gx, gy = np.meshgrid(x0 + size * (np.arange(nx) + 0.5), y0 + size * (np.arange(ny) + 0.5), indexing="ij")
    centres = np.column_stack([gx.ravel(), gy.ravel()])
    half = size / 2
    while len(centres):
        h = half * np.sqrt(2.0)
        inside = X.contains(centres)
        dist_edge = distance_to_segments(centres, X.segs)
        touches = inside | (dist_edge <= h)
        centres, inside, dist_edge = centres[touches], inside[touches], dist_edge[touches]
        if not len(centres):
            break
        gc, depth = g(centres)
        if np.any(inside):
            lb = max(lb, float(gc[inside].max()))
        ub = np.minimum(gc + h, box_upper_bounds(centres, half, Y.segs, _NEAREST))
        ub[depth >= h] = 0.0  # box lies inside y
        # boxes crossing the boundary: any point of x in the box is within
        # 2h of a boundary point, whose value is already certified
        ub = np.where(inside, ub, np.minimum(ub, edge_ub + 2 * h))
        keep = ub > lb + tol
        if np.any(~keep):
            ub_done = max(ub_done, float(ub[~keep].max()))
        centres = centres[keep]
        if not len(centres):
            break
        half /= 2
        offs = np.array([[-1, -1], [-1, 1], [1, -1], [1, 1]], dtype=float) * half
        centres = (centres[:, None, :] + offs[None, :, :]).reshape(-1, 2)
    return DistanceResult(lb, max(0.0, ub_done - lb))
