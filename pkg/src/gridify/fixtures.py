"""Test polygons: lower-bound comb, random simple polygons, thin slivers, and
an exhaustive best-grid-polygon search for tiny windows."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .geometry import GeometryError, Polygon, segments_intersect
from .grid import boundary_cycle, from_mask, mask_is_grid_polygon

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class CombParams:
    beta: float

    def __post_init__(self):
        if not self.beta > SQRT2:
            raise ValueError("comb needs beta > sqrt(2)")

    @property
    def n(self) -> int:
        return 2 * math.ceil(math.sqrt(self.beta ** 2 - 2) / 4) + 1

    @property
    def phi(self) -> float:
        return math.acos(1 - 4 / self.beta ** 2)

    @property
    def k(self) -> int:
        k = 4
        while (k - 2) * math.pi / k < self.phi - 1e-12:
            k += 1
        return k

    @property
    def side(self) -> float:
        return (self.n - 1) / SQRT2

    def zigzag(self) -> list[tuple[float, float]]:
        """Vertices p_1..p_n of the zigzag."""
        dx = math.sqrt(self.beta ** 2 - 2) / 2
        return [(0.0, i / 2) if i % 2 else (dx, i / SQRT2) for i in range(1, self.n + 1)]


def comb_polygon(beta: float) -> Polygon:
    """Regular k-gon whose vertical right edge is replaced by the zigzag.

    The k-gon sits left of the line x = 0 with its right edge centred on the
    zigzag's vertical extent, so the edge's end pieces join p_1 and p_n.
    """
    cp = CombParams(beta)
    zz = cp.zigzag()
    k, side = cp.k, cp.side
    ymid = (zz[0][1] + zz[-1][1]) / 2
    radius = side / (2 * math.sin(math.pi / k))
    apothem = side / (2 * math.tan(math.pi / k))
    cx = -apothem
    ring = [
        (cx + radius * math.cos(-math.pi / k + 2 * math.pi * m / k), ymid + radius * math.sin(-math.pi / k + 2 * math.pi * m / k))
        for m in range(k)
    ]
    ring[0] = (0.0, ymid - side / 2)
    ring[1] = (0.0, ymid + side / 2)
    verts = [ring[0]] + zz + ring[1:]
    return Polygon(verts)


def _first_crossing(xy: np.ndarray, i: int) -> int:
    """Index j > i + 1 of the first edge crossing edge i, or -1."""
    n = len(xy)
    a, b = xy[i], xy[(i + 1) % n]
    js = np.arange(i + 2, n)
    if i == 0:
        js = js[js != n - 1]
    if len(js) == 0:
        return -1
    c = xy[js]
    d = xy[(js + 1) % n]
    hit = segments_intersect(a[None, :], b[None, :], c, d)
    idx = np.flatnonzero(hit)
    return int(js[idx[0]]) if len(idx) else -1


def _untangle(xy: np.ndarray, max_swaps: int) -> np.ndarray | None:
    xy = xy.copy()
    n = len(xy)
    swaps = 0
    changed = True
    while changed:
        changed = False
        for i in range(n):
            while True:
                j = _first_crossing(xy, i)
                if j < 0:
                    break
                xy[i + 1 : j + 1] = xy[i + 1 : j + 1][::-1].copy()
                swaps += 1
                changed = True
                if swaps >= max_swaps:
                    return None
    return xy


def random_simple_polygon(n: int, seed: int, max_swaps: int = 1_000_000) -> Polygon:
    """Random points in the unit square, untangled by 2-opt moves.

    Each move reverses the chain between two crossing edges, which strictly
    shortens the tour, so the process ends with a simple polygon.
    """
    if n < 3:
        raise ValueError("need at least 3 vertices")
    while True:
        rng = np.random.default_rng(seed)
        pts = rng.random((n, 2))
        xy = _untangle(pts, max_swaps)
        if xy is not None:
            try:
                return Polygon(xy)
            except GeometryError:
                pass
        seed += 1


def thin_sliver(
    length: float,
    width: float,
    turns: int = 0,
    angle: float = 0.0,
    start: tuple[float, float] = (0.0, 0.0),
    bend: float = math.pi / 3,
) -> Polygon:
    """Strip of uniform ``width`` around a zigzag centreline.

    The centreline has ``turns + 1`` equal pieces of total ``length``,
    alternating direction by ``bend``, and starts at ``start`` heading along
    ``angle``.  With no turns this is a thin rectangle.
    """
    if not width > 0:
        raise ValueError("width must be positive")
    if not length > 0:
        raise ValueError("length must be positive")
    pieces = turns + 1
    seg = length / pieces
    dirs = [angle + (bend / 2 if (k % 2) else -bend / 2) if turns else angle for k in range(pieces)]
    pts = [np.asarray(start, dtype=float)]
    for d in dirs:
        pts.append(pts[-1] + seg * np.array([math.cos(d), math.sin(d)]))
    half = width / 2
    left, right = [], []
    for k, p in enumerate(pts):
        ds = [dirs[k - 1]] if k == len(pts) - 1 else ([dirs[k]] if k == 0 else [dirs[k - 1], dirs[k]])
        normals = [np.array([-math.sin(d), math.cos(d)]) for d in ds]
        nrm = sum(normals)
        nrm = nrm / np.linalg.norm(nrm)
        # miter: scale so the offset keeps distance `half` from both pieces
        scale = half / float(np.dot(nrm, normals[0]))
        left.append(p + scale * nrm)
        right.append(p - scale * nrm)
    return Polygon(right + left[::-1])


# exhaustive search -------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def valid_subsets(ncols: int, nrows: int) -> tuple:
    """All nonempty grid-polygon cell sets within an ncols x nrows window, as
    boolean masks, in decreasing order of the indicator vector."""
    size = ncols * nrows
    out = []
    for bits in itertools.product((1, 0), repeat=size):
        if not any(bits):
            continue
        mask = np.array(bits, dtype=bool).reshape(ncols, nrows)
        if mask_is_grid_polygon(mask):
            out.append(mask)
    return tuple(out)


def _objective(p: Polygon, cells, objective: str, tol: float) -> float:
    from .metrics import frechet_closed, hausdorff_boundary_undirected, symmetric_difference_area

    if objective == "symdiff":
        return symmetric_difference_area(p, cells)
    if objective == "hausdorff_boundary":
        return hausdorff_boundary_undirected(p, frozenset(cells), tol).value
    if objective == "frechet":
        return frechet_closed(p, boundary_cycle(cells), tol).value
    raise ValueError(f"unknown objective {objective!r}")


def brute_force_best_grid_polygon(
    p: Polygon,
    window: tuple[int, int, int, int],
    objective: str = "symdiff",
    tol: float = 1e-4,
):
    """Best grid polygon inside ``window = (col0, row0, ncols, nrows)``.

    Ties go to the lexicographically greatest indicator vector over the
    window cells in (col, row) order, i.e. earlier cells are preferred.
    Returns ``(cells, value)``.
    """
    col0, row0, ncols, nrows = window
    if ncols < 1 or nrows < 1:
        raise ValueError("empty window")
    if ncols * nrows > 16:
        raise ValueError("window too large (more than 16 cells)")
    best = None
    best_val = math.inf
    for mask in valid_subsets(ncols, nrows):
        cells = from_mask(mask, col0, row0)
        val = _objective(p, cells, objective, tol)
        if val < best_val:
            best, best_val = cells, val
    return best, best_val
