"""Planar geometry kernel: simple polygons, containment, clipping, arc length.

Everything is plain double precision.  Polygons are normalised on
construction (counterclockwise, no repeated consecutive vertices, simple) and
treated as immutable afterwards.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable, Sequence

import numpy as np

# point-on-boundary tolerance, grid units
BOUNDARY_TOL = 1e-9


class GeometryError(ValueError):
    """Raised for invalid geometric input (non-simple, degenerate, ...)."""


class Location(str, enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


Point = tuple[float, float]
Rect = tuple[float, float, float, float]  # xmin, ymin, xmax, ymax


def signed_area(pts: Sequence[Point]) -> float:
    a = 0.0
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        a += x0 * y1 - x1 * y0
    return a / 2.0


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _on_box(ax, ay, bx, by, px, py):
    return (
        (np.minimum(ax, bx) <= px)
        & (px <= np.maximum(ax, bx))
        & (np.minimum(ay, by) <= py)
        & (py <= np.maximum(ay, by))
    )


def segments_intersect(p1, p2, p3, p4):
    """Closed segment intersection test, vectorised over broadcastable arrays.

    Each argument is an ``(..., 2)`` array.  Touching counts as intersecting.
    """
    p1, p2, p3, p4 = (np.asarray(a, dtype=float) for a in (p1, p2, p3, p4))
    ax, ay = p1[..., 0], p1[..., 1]
    bx, by = p2[..., 0], p2[..., 1]
    cx, cy = p3[..., 0], p3[..., 1]
    dx, dy = p4[..., 0], p4[..., 1]
    o1 = _orient(ax, ay, bx, by, cx, cy)
    o2 = _orient(ax, ay, bx, by, dx, dy)
    o3 = _orient(cx, cy, dx, dy, ax, ay)
    o4 = _orient(cx, cy, dx, dy, bx, by)
    proper = (np.sign(o1) * np.sign(o2) < 0) & (np.sign(o3) * np.sign(o4) < 0)
    touch = (
        ((o1 == 0) & _on_box(ax, ay, bx, by, cx, cy))
        | ((o2 == 0) & _on_box(ax, ay, bx, by, dx, dy))
        | ((o3 == 0) & _on_box(cx, cy, dx, dy, ax, ay))
        | ((o4 == 0) & _on_box(cx, cy, dx, dy, bx, by))
    )
    return proper | touch


def _bad_pairs_chunk(xy: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Boolean matrix (len(rows), n): edge rows[k] illegally meets edge j."""
    n = len(xy)
    a = xy[rows][:, None, :]
    b = xy[(rows + 1) % n][:, None, :]
    c = xy[None, :, :]
    d = np.roll(xy, -1, axis=0)[None, :, :]
    hit = segments_intersect(a, b, c, d)
    j = np.arange(n)[None, :]
    i = rows[:, None]
    adjacent = (j == i) | (j == (i + 1) % n) | ((j + 1) % n == i)
    hit &= ~adjacent
    return hit


def _adjacent_folds(xy: np.ndarray) -> bool:
    """True if two consecutive edges overlap (boundary doubles back)."""
    prev = np.roll(xy, 1, axis=0)
    nxt = np.roll(xy, -1, axis=0)
    u = prev - xy
    v = nxt - xy
    cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    dot = (u * v).sum(axis=1)
    return bool(np.any((cross == 0) & (dot > 0)))


def is_simple(vertices: Iterable[Point]) -> bool:
    """True iff the closed polyline through ``vertices`` does not self-intersect.

    Non-adjacent edges must be disjoint, adjacent edges may share only their
    common vertex.  Quadratic in the number of edges, evaluated in chunks.
    """
    xy = np.asarray(list(vertices), dtype=float)
    n = len(xy)
    if n < 3:
        return False
    if np.any(np.all(xy == np.roll(xy, -1, axis=0), axis=1)):
        return False
    if _adjacent_folds(xy):
        return False
    if n == 3:
        return True
    chunk = max(1, 4_000_000 // n)
    for start in range(0, n, chunk):
        rows = np.arange(start, min(n, start + chunk))
        if np.any(_bad_pairs_chunk(xy, rows)):
            return False
    return True


class Polygon:
    """Simple polygon with counterclockwise vertex order.

    ``vertices`` are stored without repetition of the first vertex.  Instances
    are treated as immutable; geometric transforms return new polygons.
    """

    __slots__ = ("_xy", "_cum", "_area", "_edges")

    def __init__(self, vertices: Iterable[Point], *, validate: bool = True):
        pts: list[Point] = []
        for v in vertices:
            x, y = float(v[0]), float(v[1])
            if not (math.isfinite(x) and math.isfinite(y)):
                raise GeometryError("polygon coordinates must be finite")
            if pts and pts[-1] == (x, y):
                continue
            pts.append((x, y))
        while len(pts) > 1 and pts[0] == pts[-1]:
            pts.pop()
        if len(pts) < 3:
            raise GeometryError("polygon needs at least 3 distinct vertices")
        a = signed_area(pts)
        if a == 0.0:
            raise GeometryError("polygon has zero area")
        if a < 0:
            pts.reverse()
            a = -a
        if validate and not is_simple(pts):
            raise GeometryError("polygon boundary is not simple")
        xy = np.array(pts, dtype=float)
        xy.setflags(write=False)
        self._xy = xy
        self._area = a
        seg = np.roll(xy, -1, axis=0) - xy
        lengths = np.hypot(seg[:, 0], seg[:, 1])
        cum = np.concatenate([[0.0], np.cumsum(lengths)])
        cum.setflags(write=False)
        self._cum = cum
        edges = np.hstack([xy, np.roll(xy, -1, axis=0)])
        edges.setflags(write=False)
        self._edges = edges

    @classmethod
    def _trusted(cls, xy: np.ndarray) -> "Polygon":
        # skips the simplicity test; only for rigid transforms of valid polygons
        return cls(xy.tolist(), validate=False)

    # basic accessors -------------------------------------------------------
    @property
    def xy(self) -> np.ndarray:
        return self._xy

    @property
    def vertices(self) -> list[Point]:
        return [tuple(p) for p in self._xy.tolist()]

    def __len__(self) -> int:
        return len(self._xy)

    def __repr__(self) -> str:
        return f"Polygon(n={len(self)}, area={self._area:.6g})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Polygon) and np.array_equal(self._xy, other._xy)

    def __hash__(self) -> int:
        return hash(self._xy.tobytes())

    @property
    def area(self) -> float:
        return self._area

    @property
    def perimeter(self) -> float:
        return float(self._cum[-1])

    @property
    def cumulative_lengths(self) -> np.ndarray:
        """Arc length at each vertex; length n+1, last entry is the perimeter."""
        return self._cum

    @property
    def edges(self) -> np.ndarray:
        """(n, 4) array of x0, y0, x1, y1 per edge."""
        return self._edges

    @property
    def bbox(self) -> Rect:
        lo = self._xy.min(axis=0)
        hi = self._xy.max(axis=0)
        return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    # arc length parameterisation ------------------------------------------
    def point_at(self, s: float) -> Point:
        s = float(s) % self.perimeter
        i = int(np.searchsorted(self._cum, s, side="right")) - 1
        i = min(i, len(self) - 1)
        seg_len = self._cum[i + 1] - self._cum[i]
        t = 0.0 if seg_len == 0 else (s - self._cum[i]) / seg_len
        x0, y0, x1, y1 = self._edges[i]
        return (x0 + t * (x1 - x0), y0 + t * (y1 - y0))

    def sample(self, step: float) -> tuple[np.ndarray, np.ndarray]:
        """Points every ``step`` of arc length (plus all vertices).

        Returns ``(points, arc_positions)`` sorted by arc position.
        """
        ss = [np.arange(self._cum[i], self._cum[i + 1], step) for i in range(len(self))]
        s = np.concatenate(ss)
        idx = np.searchsorted(self._cum, s, side="right") - 1
        idx = np.minimum(idx, len(self) - 1)
        e = self._edges[idx]
        seg_len = self._cum[idx + 1] - self._cum[idx]
        t = np.where(seg_len > 0, (s - self._cum[idx]) / np.where(seg_len > 0, seg_len, 1), 0)
        pts = e[:, :2] + t[:, None] * (e[:, 2:] - e[:, :2])
        return pts, s

    # transforms -------------------------------------------------------------
    def translate(self, dx: float, dy: float) -> "Polygon":
        return Polygon._trusted(self._xy + np.array([dx, dy]))

    def scale(self, factor: float, origin: Point = (0.0, 0.0)) -> "Polygon":
        if not factor > 0:
            raise GeometryError("scale factor must be positive")
        o = np.asarray(origin, dtype=float)
        return Polygon._trusted((self._xy - o) * factor + o)

    # containment ----------------------------------------------------------
    def contains(self, pts) -> np.ndarray:
        """Vectorised even-odd test; boundary points may go either way."""
        return points_in_polygon(np.asarray(pts, dtype=float), self._edges)


def polygon_area(p: Polygon) -> float:
    return p.area


def points_in_polygon(pts: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Even-odd crossing test of many points against a closed edge list."""
    pts = np.atleast_2d(pts)
    out = np.zeros(len(pts), dtype=bool)
    chunk = max(1, 2_000_000 // max(1, len(edges)))
    x0, y0, x1, y1 = edges[:, 0], edges[:, 1], edges[:, 2], edges[:, 3]
    for s in range(0, len(pts), chunk):
        px = pts[s : s + chunk, 0][:, None]
        py = pts[s : s + chunk, 1][:, None]
        straddle = (y0 > py) != (y1 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
        cross = straddle & (px < xc)
        out[s : s + chunk] = (np.count_nonzero(cross, axis=1) % 2) == 1
    return out


def point_segment_distance(pts: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """Distances, shape (len(pts), len(segs))."""
    pts = np.atleast_2d(pts)
    ax, ay = segs[:, 0][None, :], segs[:, 1][None, :]
    dx, dy = (segs[:, 2] - segs[:, 0])[None, :], (segs[:, 3] - segs[:, 1])[None, :]
    px, py = pts[:, 0][:, None], pts[:, 1][:, None]
    ll = dx * dx + dy * dy
    with np.errstate(divide="ignore", invalid="ignore"):
        t = ((px - ax) * dx + (py - ay) * dy) / ll
    t = np.where(ll > 0, np.clip(t, 0.0, 1.0), 0.0)
    ex = ax + t * dx - px
    ey = ay + t * dy - py
    return np.hypot(ex, ey)


def distance_to_segments(pts: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest segment, memory-bounded."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    out = np.empty(len(pts))
    chunk = max(1, 1_000_000 // max(1, len(segs)))
    for s in range(0, len(pts), chunk):
        out[s : s + chunk] = point_segment_distance(pts[s : s + chunk], segs).min(axis=1)
    return out


def point_in_polygon(pt: Point, p: Polygon, tol: float = BOUNDARY_TOL) -> Location:
    """Classify ``pt`` as inside, on the boundary (within ``tol``) or outside."""
    q = np.array([pt], dtype=float)
    if distance_to_segments(q, p.edges)[0] <= tol:
        return Location.BOUNDARY
    return Location.INSIDE if p.contains(q)[0] else Location.OUTSIDE


def _clip_halfplane(pts: list[Point], axis: int, value: float, keep_greater: bool) -> list[Point]:
    out: list[Point] = []
    n = len(pts)
    if n == 0:
        return out

    def inside(q):
        return q[axis] >= value if keep_greater else q[axis] <= value

    for i in range(n):
        cur = pts[i]
        prev = pts[i - 1]
        cin, pin = inside(cur), inside(prev)
        if cin != pin:
            t = (value - prev[axis]) / (cur[axis] - prev[axis])
            x = prev[0] + t * (cur[0] - prev[0])
            y = prev[1] + t * (cur[1] - prev[1])
            if axis == 0:
                x = value
            else:
                y = value
            out.append((x, y))
        if cin:
            out.append(cur)
    return out


def clip_polygon_to_rect(p: Polygon | Sequence[Point], r: Rect) -> list[Point]:
    """Sutherland-Hodgman clip against an axis-aligned rectangle.

    The result may contain zero-width bridges; they do not affect its area.
    """
    xmin, ymin, xmax, ymax = r
    pts = p.vertices if isinstance(p, Polygon) else [tuple(v) for v in p]
    pts = _clip_halfplane(pts, 0, xmin, True)
    pts = _clip_halfplane(pts, 0, xmax, False)
    pts = _clip_halfplane(pts, 1, ymin, True)
    pts = _clip_halfplane(pts, 1, ymax, False)
    return pts


def clip_area(p: Polygon, r: Rect) -> float:
    """Area of ``p`` intersected with the rectangle ``r``."""
    xmin, ymin, xmax, ymax = r
    if not (xmax > xmin and ymax > ymin):
        raise GeometryError("clip rectangle is degenerate")
    bx0, by0, bx1, by1 = p.bbox
    if bx1 <= xmin or bx0 >= xmax or by1 <= ymin or by0 >= ymax:
        return 0.0
    pts = clip_polygon_to_rect(p, r)
    if len(pts) < 3:
        return 0.0
    return max(0.0, signed_area(pts))


def _ramp_mean(v0, v1, lo, hi):
    """Mean of clamp(v, lo, hi) - lo as v moves linearly from v0 to v1."""
    a = np.minimum(v0, v1)
    b = np.maximum(v0, v1)
    width = b - a
    ca = np.clip(a, lo, hi)
    cb = np.clip(b, lo, hi)
    mid_part = cb - ca  # length of [a, b] inside [lo, hi]
    above = b - np.maximum(a, hi)
    above = np.maximum(above, 0.0)
    safe = np.where(width > 0, width, 1.0)
    mean = (mid_part * ((ca + cb) / 2.0 - lo) + above * (hi - lo)) / safe
    flat = np.clip(v0, lo, hi) - lo
    return np.where(width > 0, mean, flat)


def grid_overlap_areas(p: Polygon, x0: float, y0: float, ncols: int, nrows: int) -> np.ndarray:
    """Area of ``p`` inside each unit square of a grid.

    Entry ``[i, j]`` is the area of ``p`` within
    ``[x0+i, x0+i+1] x [y0+j, y0+j+1]``.  Uses the vertical-slab form of
    Green's theorem, so each edge only touches the columns it spans.
    """
    out = np.zeros((ncols, nrows))
    e = p.edges
    ex0, ey0, ex1, ey1 = e[:, 0], e[:, 1], e[:, 2], e[:, 3]
    exmin = np.minimum(ex0, ex1)
    exmax = np.maximum(ex0, ex1)
    row_lo = y0 + np.arange(nrows)
    for i in range(ncols):
        cx0 = x0 + i
        cx1 = cx0 + 1.0
        sel = (exmax > cx0) & (exmin < cx1) & (ex0 != ex1)
        if not np.any(sel):
            continue
        ax, ay, bx, by = ex0[sel], ey0[sel], ex1[sel], ey1[sel]
        # clip each edge to the column, keeping orientation
        ua = np.clip(ax, cx0, cx1)
        ub = np.clip(bx, cx0, cx1)
        slope = (by - ay) / (bx - ax)
        va = ay + (ua - ax) * slope
        vb = ay + (ub - ax) * slope
        dxs = (ub - ua)[:, None]  # signed
        m = _ramp_mean(va[:, None], vb[:, None], row_lo[None, :], row_lo[None, :] + 1.0)
        out[i] = -(dxs * m).sum(axis=0)
    np.maximum(out, 0.0, out=out)
    return out


def perimeter_distance(p: Polygon, a: float, b: float) -> float:
    """Shortest distance between two arc-length positions along the boundary."""
    L = p.perimeter
    d = abs((a % L) - (b % L))
    return min(d, L - d)


def closed_segments(xy: np.ndarray) -> np.ndarray:
    """(n, 4) segments of the closed polyline through ``xy``."""
    xy = np.asarray(xy, dtype=float)
    return np.hstack([xy, np.roll(xy, -1, axis=0)])


def merge_collinear(xy: np.ndarray) -> np.ndarray:
    """Drop vertices of a closed polyline that sit inside a straight run."""
    xy = np.asarray(xy, dtype=float)
    if len(xy) <= 3:
        return xy
    prev = np.roll(xy, 1, axis=0)
    nxt = np.roll(xy, -1, axis=0)
    u = xy - prev
    v = nxt - xy
    cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    dot = (u * v).sum(axis=1)
    keep = ~((np.abs(cross) <= 1e-12) & (dot > 0))
    if keep.sum() < 3:
        return xy
    return xy[keep]
