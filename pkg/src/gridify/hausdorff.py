"""Grid polygon with bounded Hausdorff distance to a simple polygon.

The construction takes the union of four cell sets:

* Q1: cells whose module lies inside P,
* Q2: even-even cells whose module meets P,
* Q3: both mediating cells of every point-contact in Q1 | Q2,
* Q4: connector cells joining the components of Q1 | Q2 | Q3.

The module of a cell is the 2x2 square sharing its centre.  Afterwards the
result may be refined by local add/remove/shift moves that lower the area
of the symmetric difference while keeping the grid polygon valid and the
Hausdorff distances within a relaxed bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .geometry import Polygon, clip_area, grid_overlap_areas
from .grid import (
    Cell,
    InvariantError,
    from_mask,
    is_even_even,
    mask_hole_free,
    mask_is_grid_polygon,
    mask_point_contacts,
    mediating_cells,
    module_of,
    point_contacts,
    to_mask,
)

SQRT2 = math.sqrt(2.0)
NEAR_BOUND = SQRT2 / 2
FAR_BOUND = 1.5 * SQRT2
AREA_TOL = 1e-9
# band cells closer than this to the module-tangent distance get an exact
# clip test, so the traced classifier agrees with the clipping one
_TANGENT_MARGIN = 1e-4

_FOUR = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass(frozen=True)
class CellClassification:
    """Per-cell module predicates over a window ``[col0, col0+w) x [row0, row0+h)``."""

    col0: int
    row0: int
    module_subset_of_P: np.ndarray
    module_intersects_P: np.ndarray
    module_meets_boundary: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.module_subset_of_P.shape

    def subset_cells(self) -> frozenset[Cell]:
        return from_mask(self.module_subset_of_P, self.col0, self.row0)

    def intersect_cells(self) -> frozenset[Cell]:
        return from_mask(self.module_intersects_P, self.col0, self.row0)

    def _index(self, c: Cell):
        i, j = c[0] - self.col0, c[1] - self.row0
        if 0 <= i < self.shape[0] and 0 <= j < self.shape[1]:
            return i, j
        return None

    def intersects(self, c: Cell) -> bool:
        ij = self._index(c)
        return ij is not None and bool(self.module_intersects_P[ij])

    def subset(self, c: Cell) -> bool:
        ij = self._index(c)
        return ij is not None and bool(self.module_subset_of_P[ij])

    def same_as(self, other: "CellClassification") -> bool:
        return (
            self.subset_cells() == other.subset_cells()
            and self.intersect_cells() == other.intersect_cells()
        )


def _window(p: Polygon) -> tuple[int, int, int, int]:
    """Cells whose module can meet P, plus one spare ring."""
    xmin, ymin, xmax, ymax = p.bbox
    c0 = math.ceil(xmin - 1.5) - 1
    c1 = math.floor(xmax + 0.5) + 1
    r0 = math.ceil(ymin - 1.5) - 1
    r1 = math.floor(ymax + 0.5) + 1
    return c0, r0, c1 - c0 + 1, r1 - r0 + 1


def _segment_meets_rect(e: np.ndarray, rect) -> np.ndarray:
    """Closed segment / closed rectangle intersection (Liang-Barsky), vectorised."""
    x0, y0, x1, y1 = rect
    ax, ay = e[:, 0], e[:, 1]
    dx, dy = e[:, 2] - ax, e[:, 3] - ay
    tmin = np.zeros(len(e))
    tmax = np.ones(len(e))
    ok = np.ones(len(e), dtype=bool)
    for pp, qq in ((-dx, ax - x0), (dx, x1 - ax), (-dy, ay - y0), (dy, y1 - ay)):
        zero = pp == 0
        ok &= ~(zero & (qq < 0))
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(zero, 0.0, qq / np.where(zero, 1.0, pp))
        tmin = np.where(~zero & (pp < 0), np.maximum(tmin, t), tmin)
        tmax = np.where(~zero & (pp > 0), np.minimum(tmax, t), tmax)
    return ok & (tmin <= tmax)


def classify_cells(p: Polygon) -> CellClassification:
    """Reference classification by clipping P against every module."""
    c0, r0, w, h = _window(p)
    sub = np.zeros((w, h), dtype=bool)
    inter = np.zeros((w, h), dtype=bool)
    meets = np.zeros((w, h), dtype=bool)
    edges = p.edges
    for i in range(w):
        for j in range(h):
            m = module_of((c0 + i, r0 + j))
            a = clip_area(p, m)
            touch = bool(_segment_meets_rect(edges, m).any())
            sub[i, j] = a >= 4.0 - AREA_TOL
            inter[i, j] = a > AREA_TOL or touch
            meets[i, j] = touch
    return CellClassification(c0, r0, sub, inter, meets)


def band_mask(p: Polygon, c0: int, r0: int, w: int, h: int, radius: float) -> np.ndarray:
    """Cells whose centre lies within L-infinity distance ``radius`` of the boundary.

    Each edge grown by the square of half-side ``radius`` is a hexagon; it is
    rasterised column by column, so the cost is proportional to the number
    of band cells plus the number of edges.
    """
    diff = np.zeros((w, h + 1), dtype=np.int32)
    for ax, ay, bx, by in p.edges:
        lo_x, hi_x = min(ax, bx), max(ax, bx)
        cs = np.arange(math.ceil(lo_x - radius - 0.5), math.floor(hi_x + radius - 0.5) + 1)
        if len(cs) == 0:
            continue
        X = cs + 0.5
        if ax == bx:
            ylo = np.full(len(cs), min(ay, by) - radius)
            yhi = np.full(len(cs), max(ay, by) + radius)
        else:
            slope = (by - ay) / (bx - ax)
            ya = ay + (np.clip(X - radius, lo_x, hi_x) - ax) * slope
            yb = ay + (np.clip(X + radius, lo_x, hi_x) - ax) * slope
            ylo = np.minimum(ya, yb) - radius
            yhi = np.maximum(ya, yb) + radius
        rlo = np.ceil(ylo - 0.5).astype(int) - r0
        rhi = np.floor(yhi - 0.5).astype(int) - r0 + 1
        ii = cs - c0
        ok = (ii >= 0) & (ii < w) & (rlo < rhi)
        ii, rlo, rhi = ii[ok], np.clip(rlo[ok], 0, h), np.clip(rhi[ok], 0, h)
        np.add.at(diff, (ii, rlo), 1)
        np.add.at(diff, (ii, rhi), -1)
    return np.cumsum(diff, axis=1)[:, :h] > 0


def centres_inside(p: Polygon, c0: int, r0: int, w: int, h: int) -> np.ndarray:
    """Even-odd containment of cell centres, one horizontal scanline per row."""
    e = p.edges
    ay, by = e[:, 1], e[:, 3]
    X = c0 + np.arange(w) + 0.5
    out = np.zeros((w, h), dtype=bool)
    for j in range(h):
        y = r0 + j + 0.5
        sel = (ay > y) != (by > y)
        if not np.any(sel):
            continue
        s = e[sel]
        xs = s[:, 0] + (y - s[:, 1]) * (s[:, 2] - s[:, 0]) / (s[:, 3] - s[:, 1])
        xs.sort()
        out[:, j] = np.searchsorted(xs, X) % 2 == 1
    return out


def trace_classify_cells(p: Polygon) -> CellClassification:
    """Classification from the boundary band: a module meets the boundary
    exactly when the cell centre is within L-infinity distance 1 of it."""
    c0, r0, w, h = _window(p)
    band = band_mask(p, c0, r0, w, h, 1.0)
    core = band_mask(p, c0, r0, w, h, 1.0 - _TANGENT_MARGIN)
    inside = centres_inside(p, c0, r0, w, h)
    sub = inside & ~band
    for i, j in np.argwhere(inside & band & ~core):
        sub[i, j] = clip_area(p, module_of((c0 + i, r0 + j))) >= 4.0 - AREA_TOL
    inter = inside | band
    return CellClassification(c0, r0, sub, inter, band)


# construction -----------------------------------------------------------------

def build_q1_q2(cc: CellClassification) -> tuple[frozenset[Cell], frozenset[Cell]]:
    q1 = cc.subset_cells()
    q2 = frozenset(c for c in cc.intersect_cells() if is_even_even(c))
    return q1, q2


def build_q3(q12) -> frozenset[Cell]:
    s = frozenset(q12)
    out = set()
    for c1, c2 in point_contacts(s):
        out.update(mediating_cells(c1, c2))
    return frozenset(out - s)


def _label(cells) -> dict:
    from .grid import to_mask

    mask, c0, r0 = to_mask(cells, pad=1)
    lab, _ = ndimage.label(mask, structure=_FOUR)
    return {c: int(lab[c[0] - c0, c[1] - r0]) for c in cells}


def _valid_after_adding(cells: set, c: Cell) -> bool:
    from .grid import to_mask

    mask, _, _ = to_mask(cells | {c}, pad=1)
    return mask_hole_free(mask) and mask_point_contacts(mask) == 0


def build_q4(q123, cc: CellClassification, p: Polygon, strategy: str = "arbitrary") -> frozenset[Cell]:
    """Connector cells, each between two Q2 cells of different components.

    A connector sits between two even-even cells that lie on opposite sides
    of it.  ``arbitrary`` takes the lexicographically first admissible one;
    ``greedy_overlap`` the one with the largest overlap with P.  Every
    connector merges two components, so none is superfluous.
    """
    if strategy not in ("arbitrary", "greedy_overlap"):
        raise ValueError(f"unknown strategy {strategy!r}")
    cur = set(q123)
    if not cur:
        return frozenset()
    added: set[Cell] = set()
    overlap = None
    if strategy == "greedy_overlap":
        w, h = cc.shape
        overlap = grid_overlap_areas(p, cc.col0, cc.row0, w, h)
    while True:
        comp = _label(cur)
        if len(set(comp.values())) <= 1:
            break
        q2 = [c for c in cur if is_even_even(c) and cc.intersects(c)]
        cands = set()
        for col, row in q2:
            for dx, dy in ((2, 0), (0, 2)):
                other = (col + dx, row + dy)
                mid = (col + dx // 2, row + dy // 2)
                if other in cur and comp[other] != comp[(col, row)] and mid not in cur and cc.intersects(mid):
                    cands.add(mid)
        order = sorted(cands)
        if overlap is not None:
            order.sort(key=lambda c: (-overlap[c[0] - cc.col0, c[1] - cc.row0], c))
        pick = next((c for c in order if _valid_after_adding(cur, c)), None)
        if pick is None:
            raise InvariantError(
                f"no admissible connector between {len(set(comp.values()))} components"
            )
        cur.add(pick)
        added.add(pick)
    return frozenset(added)


@dataclass(frozen=True)
class HausdorffBuild:
    q1: frozenset
    q2: frozenset
    q3: frozenset
    q4: frozenset
    result: frozenset
    provenance: dict
    classification: CellClassification = field(repr=False)


def construct_hausdorff(p: Polygon, strategy: str = "arbitrary", classifier: str = "trace") -> HausdorffBuild:
    if classifier == "trace":
        cc = trace_classify_cells(p)
    elif classifier == "baseline":
        cc = classify_cells(p)
    else:
        raise ValueError(f"unknown classifier {classifier!r}")
    q1, q2 = build_q1_q2(cc)
    q3 = build_q3(q1 | q2)
    q4 = build_q4(q1 | q2 | q3, cc, p, strategy)
    result = q1 | q2 | q3 | q4
    prov = {}
    for name, s in (("q4", q4), ("q3", q3), ("q2", q2), ("q1", q1)):
        for c in s:
            prov[c] = name
    if not mask_is_grid_polygon(to_mask(result, pad=1)[0]):
        raise InvariantError("constructed cell set is not a grid polygon")
    return HausdorffBuild(q1, q2, q3, q4, result, prov, cc)


# post-processing --------------------------------------------------------------

@dataclass(frozen=True)
class PostprocessConfig:
    allow_add: bool = True
    allow_remove: bool = True
    allow_shift: bool = True
    relaxed_bound: float = FAR_BOUND
    max_iterations: int = 10_000

    def __post_init__(self):
        if self.relaxed_bound < NEAR_BOUND:
            raise ValueError("relaxed_bound must be at least sqrt(2)/2")


_EIGHT = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx, dy) != (0, 0)]


def _shift(mask: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """out[i, j] = mask[i + dx, j + dy], False outside."""
    out = np.zeros_like(mask)
    w, h = mask.shape
    out[max(0, -dx):min(w, w - dx), max(0, -dy):min(h, h - dy)] = mask[
        max(0, dx):min(w, w + dx), max(0, dy):min(h, h + dy)
    ]
    return out


def _edge_offsets(bound: float):
    """Unit grid edges (relative to cell [0,1]^2) every point of the cell is
    within ``bound`` of.  Returns horizontal and vertical edge offsets."""
    corners = np.array([(0, 0), (1, 0), (0, 1), (1, 1)], dtype=float)
    horiz, vert = [], []
    for di in range(-3, 4):
        for dj in range(-3, 5):
            # horizontal edge from (di, dj) to (di+1, dj)
            gap_x = np.maximum.reduce([di - corners[:, 0], np.zeros(4), corners[:, 0] - di - 1])
            if np.hypot(gap_x, corners[:, 1] - dj).max() <= bound:
                horiz.append((di, dj))
    for di in range(-3, 5):
        for dj in range(-3, 4):
            gap_y = np.maximum.reduce([dj - corners[:, 1], np.zeros(4), corners[:, 1] - dj - 1])
            if np.hypot(corners[:, 0] - di, gap_y).max() <= bound:
                vert.append((di, dj))
    return horiz, vert


def _cell_offsets(bound: float):
    """Cell offsets whose cell is within ``bound`` of every point of [0,1]^2."""
    corners = np.array([(0, 0), (1, 0), (0, 1), (1, 1)], dtype=float)
    zero = np.zeros(4)
    out = []
    for di in range(-3, 4):
        for dj in range(-3, 4):
            gx = np.maximum.reduce([di - corners[:, 0], zero, corners[:, 0] - di - 1])
            gy = np.maximum.reduce([dj - corners[:, 1], zero, corners[:, 1] - dj - 1])
            if np.hypot(gx, gy).max() <= bound:
                out.append((di, dj))
    return out


class _BoundChecker:
    """Sufficient grid conditions for the four Hausdorff bounds, with a
    fallback to the certified metrics when a condition fails."""

    def __init__(self, p: Polygon, cc: CellClassification, bound: float, tol: float = 1e-3):
        self.p = p
        self.bound = bound
        self.tol = tol
        self.c0, self.r0 = cc.col0, cc.row0
        w, h = cc.shape
        self.meets = cc.module_meets_boundary
        self.touch_boundary = band_mask(p, cc.col0, cc.row0, w, h, 0.5)
        ov = grid_overlap_areas(p, cc.col0, cc.row0, w, h)
        self.touch_region = (ov > 0) | self.touch_boundary
        self.module_rule = bound >= FAR_BOUND - 1e-12
        self.cell_offs = _cell_offsets(bound)
        self.h_offs, self.v_offs = _edge_offsets(bound)

    def _cheap(self, q: np.ndarray) -> dict:
        res = {}
        if self.module_rule:
            res["region_q_to_p"] = True  # every cell carries a module meeting P
            hx = q[1:, :] != q[:-1, :]
            hy = q[:, 1:] != q[:, :-1]
            okx = self.meets[1:, :] | self.meets[:-1, :]
            oky = self.meets[:, 1:] | self.meets[:, :-1]
            res["boundary_q_to_p"] = bool(np.all(okx[hx]) and np.all(oky[hy]))
        else:
            res["region_q_to_p"] = False
            res["boundary_q_to_p"] = False
        near = np.zeros_like(q)
        for di, dj in self.cell_offs:
            near |= _shift(q, di, dj)
        res["region_p_to_q"] = bool(np.all(near[self.touch_region]))
        w, h = q.shape
        qp = np.zeros((w + 2, h + 2), dtype=bool)
        qp[1:-1, 1:-1] = q
        # H[i, j]: edge at y = j between cells (i, j-1) and (i, j); V likewise
        H = (qp[1:-1, 1:] != qp[1:-1, :-1])
        V = (qp[1:, 1:-1] != qp[:-1, 1:-1])
        cov = np.zeros_like(q)
        for di, dj in self.h_offs:
            cov |= _shift(H, di, dj)[:, :h]
        for di, dj in self.v_offs:
            cov |= _shift(V, di, dj)[:w, :]
        res["boundary_p_to_q"] = bool(np.all(cov[self.touch_boundary]))
        return res

    def exact(self, cells, which):
        from .metrics import hausdorff_boundary, hausdorff_region

        fns = {
            "region_q_to_p": lambda: hausdorff_region(cells, self.p, self.tol),
            "region_p_to_q": lambda: hausdorff_region(self.p, cells, self.tol),
            "boundary_q_to_p": lambda: hausdorff_boundary(cells, self.p, self.tol),
            "boundary_p_to_q": lambda: hausdorff_boundary(self.p, cells, self.tol),
        }
        r = fns[which]()
        return r.value + r.error_bound <= self.bound + 1e-6

    def ok(self, q: np.ndarray) -> bool:
        cheap = self._cheap(q)
        if all(cheap.values()):
            return True
        cells = from_mask(q, self.c0, self.r0)
        return all(v or self.exact(cells, k) for k, v in cheap.items())


def postprocess(build: HausdorffBuild, p: Polygon, cfg: PostprocessConfig | None = None) -> frozenset[Cell]:
    """Local search lowering the symmetric difference.

    Moves are tried as adds, then removes, then shifts, each in
    lexicographic cell order; the first move that strictly lowers the
    symmetric difference and keeps Q a valid grid polygon within the
    relaxed Hausdorff bound is applied, and the scan restarts.
    """
    cfg = cfg or PostprocessConfig()
    cc = build.classification
    c0, r0 = cc.col0, cc.row0
    w, h = cc.shape
    ov = grid_overlap_areas(p, c0, r0, w, h)
    allowed = cc.module_intersects_P
    q = np.zeros((w, h), dtype=bool)
    for c in build.result:
        q[c[0] - c0, c[1] - r0] = True
    checker = _BoundChecker(p, cc, cfg.relaxed_bound)
    eps = 1e-12

    def accept(trial: np.ndarray) -> bool:
        return mask_is_grid_polygon(trial) and checker.ok(trial)

    for _ in range(cfg.max_iterations):
        moved = False
        if cfg.allow_add:
            nb = ndimage.binary_dilation(q, structure=_FOUR) & ~q
            for i, j in np.argwhere(nb & allowed & (ov > 0.5 + eps)):
                q[i, j] = True
                if accept(q):
                    moved = True
                    break
                q[i, j] = False
        if not moved and cfg.allow_remove and q.sum() > 1:
            for i, j in np.argwhere(q & (ov < 0.5 - eps)):
                q[i, j] = False
                if accept(q):
                    moved = True
                    break
                q[i, j] = True
        if not moved and cfg.allow_shift:
            for i, j in np.argwhere(q):
                for dx, dy in _EIGHT:
                    a, b = i + dx, j + dy
                    if not (0 <= a < w and 0 <= b < h) or q[a, b] or not allowed[a, b]:
                        continue
                    if ov[a, b] <= ov[i, j] + eps:
                        continue
                    q[i, j] = False
                    q[a, b] = True
                    if accept(q):
                        moved = True
                        break
                    q[i, j] = True
                    q[a, b] = False
                if moved:
                    break
        if not moved:
            break
    return from_mask(q, c0, r0)
