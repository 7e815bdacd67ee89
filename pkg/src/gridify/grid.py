"""Pixel grid model: cells, modules, adjacency, topology checks, boundary cycles.

A cell ``(col, row)`` is the unit square ``[col, col+1] x [row, row+1]``.
Cell sets are plain ``frozenset`` objects of integer pairs; the array helpers
at the bottom convert them to boolean masks for the vectorised checks.
"""

from __future__ import annotations

import enum
from typing import Iterable

import numpy as np
from scipy import ndimage

Cell = tuple[int, int]
Vertex = tuple[int, int]

_FOUR = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


class GridTopologyError(ValueError):
    """A cell set is not a grid polygon (hole, point-contact, several parts)."""


class InvariantError(RuntimeError):
    """An internal guarantee of a construction failed to hold."""


class Adjacency(str, enum.Enum):
    EDGE = "edge_adjacent"
    POINT = "point_adjacent"
    NONE = "none"


def cellset(cells: Iterable) -> frozenset[Cell]:
    return frozenset((int(c), int(r)) for c, r in cells)


def is_even_even(c: Cell) -> bool:
    # Python's % is floor-modulo, so negative indices get the same parity rule
    return c[0] % 2 == 0 and c[1] % 2 == 0


def parity_class(c: Cell) -> str:
    names = ("even", "odd")
    return f"{names[c[0] % 2]}-{names[c[1] % 2]}"


def module_of(c: Cell) -> tuple[float, float, float, float]:
    """The 2x2 square centred on the centre of ``c``."""
    col, row = c
    return (col - 0.5, row - 0.5, col + 1.5, row + 1.5)


def adjacency(c1: Cell, c2: Cell) -> Adjacency:
    dx = abs(c1[0] - c2[0])
    dy = abs(c1[1] - c2[1])
    if dx + dy == 1:
        return Adjacency.EDGE
    if dx == 1 and dy == 1:
        return Adjacency.POINT
    return Adjacency.NONE


def edge_neighbours(c: Cell) -> list[Cell]:
    col, row = c
    return [(col + 1, row), (col - 1, row), (col, row + 1), (col, row - 1)]


def point_contacts(cells: Iterable[Cell]) -> list[tuple[Cell, Cell]]:
    """Diagonal pairs in ``cells`` with neither shared edge-neighbour present."""
    s = cells if isinstance(cells, (set, frozenset)) else set(cells)
    out = []
    for c in s:
        col, row = c
        for dx in (1, -1):
            d = (col + dx, row + 1)
            if d in s and (col + dx, row) not in s and (col, row + 1) not in s:
                out.append(tuple(sorted((c, d))))
    return sorted(out)


def mediating_cells(c1: Cell, c2: Cell) -> tuple[Cell, Cell]:
    """The two cells edge-adjacent to both members of a diagonal pair."""
    return (c1[0], c2[1]), (c2[0], c1[1])


# mask helpers ----------------------------------------------------------------

def to_mask(cells: Iterable[Cell], pad: int = 1) -> tuple[np.ndarray, int, int]:
    """Boolean mask of ``cells`` on its bounding box grown by ``pad``.

    Returns ``(mask, col0, row0)`` with ``mask[i, j]`` = cell ``(col0+i, row0+j)``.
    """
    arr = np.array(sorted(cells), dtype=int).reshape(-1, 2)
    if len(arr) == 0:
        return np.zeros((2 * pad, 2 * pad), dtype=bool), -pad, -pad
    lo = arr.min(axis=0) - pad
    hi = arr.max(axis=0) + pad
    mask = np.zeros((hi[0] - lo[0] + 1, hi[1] - lo[1] + 1), dtype=bool)
    mask[arr[:, 0] - lo[0], arr[:, 1] - lo[1]] = True
    return mask, int(lo[0]), int(lo[1])


def from_mask(mask: np.ndarray, col0: int, row0: int) -> frozenset[Cell]:
    ii, jj = np.nonzero(mask)
    return frozenset(zip((ii + col0).tolist(), (jj + row0).tolist()))


def mask_components(mask: np.ndarray) -> int:
    return int(ndimage.label(mask, structure=_FOUR)[1])


def mask_hole_free(mask: np.ndarray) -> bool:
    """Complement (4-connected, on a padded frame) has a single component.

    Diagonal contacts therefore close off regions; this is the strict,
    point-adjacency-inclusive notion of hole-freeness.
    """
    padded = np.pad(mask, 1, constant_values=False)
    return int(ndimage.label(~padded, structure=_FOUR)[1]) == 1


def mask_point_contacts(mask: np.ndarray) -> int:
    a = mask[:-1, :-1]
    b = mask[1:, 1:]
    c = mask[1:, :-1]
    d = mask[:-1, 1:]
    main = a & b & ~c & ~d
    anti = c & d & ~a & ~b
    return int(main.sum() + anti.sum())


def mask_is_grid_polygon(mask: np.ndarray) -> bool:
    return (
        mask.any()
        and mask_components(mask) == 1
        and mask_hole_free(mask)
        and mask_point_contacts(mask) == 0
    )


# topology --------------------------------------------------------------------

def is_hole_free(cells: Iterable[Cell]) -> bool:
    mask, _, _ = to_mask(cells)
    return mask_hole_free(mask)


def is_simply_connected(cells: Iterable[Cell]) -> bool:
    """Edge-connected and without holes (diagonal contacts enclose)."""
    s = cellset(cells)
    if not s:
        raise GridTopologyError("empty cell set")
    mask, _, _ = to_mask(s)
    return mask_components(mask) == 1 and mask_hole_free(mask)


def is_grid_polygon(cells: Iterable[Cell]) -> bool:
    s = cellset(cells)
    return bool(s) and is_simply_connected(s) and not point_contacts(s)


def _boundary_edges(s: frozenset[Cell]) -> dict[Vertex, list[Vertex]]:
    """Directed unit edges with the set on their left (counterclockwise)."""
    out: dict[Vertex, list[Vertex]] = {}
    for col, row in s:
        if (col, row - 1) not in s:
            out.setdefault((col, row), []).append((col + 1, row))
        if (col + 1, row) not in s:
            out.setdefault((col + 1, row), []).append((col + 1, row + 1))
        if (col, row + 1) not in s:
            out.setdefault((col + 1, row + 1), []).append((col, row + 1))
        if (col - 1, row) not in s:
            out.setdefault((col, row + 1), []).append((col, row))
    return out


def boundary_edge_count(cells: Iterable[Cell]) -> int:
    s = cellset(cells)
    return sum(len(v) for v in _boundary_edges(s).values())


def boundary_segments(cells: Iterable[Cell]) -> np.ndarray:
    """All unit boundary edges of an arbitrary cell set, as (m, 4) floats."""
    s = cellset(cells)
    rows = [(a[0], a[1], b[0], b[1]) for a, outs in _boundary_edges(s).items() for b in outs]
    return np.array(rows, dtype=float).reshape(-1, 4)


def boundary_cycle(cells: Iterable[Cell]) -> "GridCycle":
    """Counterclockwise outer boundary of a grid polygon.

    Starts at the lexicographically smallest boundary vertex.  Raises
    ``GridTopologyError`` naming the first violated precondition.
    """
    s = cellset(cells)
    if not s:
        raise GridTopologyError("empty cell set")
    mask, col0, row0 = to_mask(s)
    labels, ncomp = ndimage.label(mask, structure=_FOUR)
    if ncomp != 1:
        first = [min(from_mask(labels == k, col0, row0)) for k in range(1, ncomp + 1)]
        raise GridTopologyError(f"cell set has {ncomp} components, first cells {sorted(first)}")
    padded = np.pad(mask, 1, constant_values=False)
    holes, nh = ndimage.label(~padded, structure=_FOUR)
    if nh != 1:
        outside = holes[0, 0]
        hole_cells = [
            min(from_mask(holes[1:-1, 1:-1] == k, col0, row0))
            for k in range(1, nh + 1)
            if k != outside
        ]
        raise GridTopologyError(f"cell set has a hole containing {sorted(hole_cells)[0]}")
    contacts = point_contacts(s)
    if contacts:
        raise GridTopologyError(f"cell set has a point-contact between {contacts[0]}")
    out = _boundary_edges(s)
    start = min(out)
    verts = [start]
    cur = out[start][0]
    while cur != start:
        verts.append(cur)
        cur = out[cur][0]
    return GridCycle(verts)


class GridCycle:
    """Simple cycle in the integer grid graph (no repeated closing vertex)."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable[Vertex], *, validate: bool = True):
        vs = tuple((int(x), int(y)) for x, y in vertices)
        if validate:
            if len(vs) < 4:
                raise GridTopologyError("grid cycle needs at least 4 vertices")
            if len(set(vs)) != len(vs):
                raise GridTopologyError("grid cycle repeats a vertex")
            for a, b in zip(vs, vs[1:] + vs[:1]):
                if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
                    raise GridTopologyError(f"grid cycle step {a}->{b} is not a unit edge")
        self.vertices = vs

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, GridCycle) and self.vertices == other.vertices

    def __repr__(self) -> str:
        return f"GridCycle(len={len(self)})"

    @property
    def xy(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)

    def signed_area(self) -> float:
        xy = self.xy
        nxt = np.roll(xy, -1, axis=0)
        return float((xy[:, 0] * nxt[:, 1] - nxt[:, 0] * xy[:, 1]).sum() / 2)

    def cells(self) -> frozenset[Cell]:
        return cycle_cells(self.vertices)


def cycle_cells(vertices) -> frozenset[Cell]:
    """Cells enclosed by a closed grid path (even-odd rule)."""
    vs = list(vertices)
    crossings: dict[int, list[int]] = {}
    for a, b in zip(vs, vs[1:] + vs[:1]):
        if a[0] == b[0] and a[1] != b[1]:
            crossings.setdefault(min(a[1], b[1]), []).append(a[0])
    out = set()
    for row, xs in crossings.items():
        xs.sort()
        for x0, x1 in zip(xs[0::2], xs[1::2]):
            out.update((c, row) for c in range(x0, x1))
    return frozenset(out)


def nonogram_clues(cells: Iterable[Cell]) -> tuple[list[list[int]], list[list[int]]]:
    """Run-length clues over the bounding box, rows then columns.

    Rows are listed by increasing row index, columns by increasing column
    index; runs inside a line go in increasing coordinate order.
    """
    s = cellset(cells)
    if not s:
        return [], []
    mask, _, _ = to_mask(s, pad=0)

    def runs(line: np.ndarray) -> list[int]:
        out, n = [], 0
        for v in line:
            if v:
                n += 1
            elif n:
                out.append(n)
                n = 0
        if n:
            out.append(n)
        return out

    rows = [runs(mask[:, j]) for j in range(mask.shape[1])]
    cols = [runs(mask[i, :]) for i in range(mask.shape[0])]
    return rows, cols


def nonogram_text(cells: Iterable[Cell]) -> str:
    rows, cols = nonogram_clues(cells)
    lines = ["# rows"] + [" ".join(map(str, r)) for r in rows]
    lines += ["# columns"] + [" ".join(map(str, c)) for c in cols]
    return "\n".join(lines) + "\n"
