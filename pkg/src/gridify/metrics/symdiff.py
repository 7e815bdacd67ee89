"""Area of the symmetric difference between a polygon and a cell set."""

from __future__ import annotations

import numpy as np

from ..geometry import Polygon, grid_overlap_areas


def cell_overlaps(p: Polygon, cells) -> dict:
    """Area of ``p`` inside each cell."""
    cells = sorted(cells)
    if not cells:
        return {}
    arr = np.array(cells)
    col0, row0 = arr.min(axis=0)
    col1, row1 = arr.max(axis=0)
    ov = grid_overlap_areas(p, float(col0), float(row0), int(col1 - col0 + 1), int(row1 - row0 + 1))
    return {c: float(ov[c[0] - col0, c[1] - row0]) for c in cells}


def symmetric_difference_area(p: Polygon, cells, normalized: bool = False) -> float:
    ov = cell_overlaps(p, cells)
    val = p.area + len(ov) - 2 * sum(ov.values())
    val = max(val, 0.0)
    return val / p.area if normalized else val


def normalized_symmetric_difference(p: Polygon, cells) -> float:
    return symmetric_difference_area(p, cells, normalized=True)
