"""Grid polygon with bounded Fréchet distance to a simple polygon.

Every grid vertex owns the unit square centred on it.  Walking along the
polygon boundary, the sequence of squares it passes through gives a closed
chain of grid vertices, each mapped to the stretch of boundary spent in its
square.  Repeated vertices are removed by cutting out the shorter of the two
loops between the repetitions (its boundary stretch is folded into the
surviving vertex), which leaves a simple grid cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Polygon
from .grid import GridCycle, InvariantError, Vertex, cycle_cells

SQRT2 = math.sqrt(2.0)
CORNER_TOL = 1e-9
PERTURB = 1e-7


@dataclass(frozen=True)
class Visit:
    vertex: Vertex
    start: float
    length: float


@dataclass(frozen=True)
class VisitMapping:
    """Cyclic chain of grid vertices, each with a boundary stretch.

    Visit ``k`` owns the arc ``[start, start + length)`` (mod perimeter);
    the stretches follow each other around the boundary.
    """

    entries: tuple[Visit, ...]
    perimeter: float
    removed_lengths: tuple[float, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def vertices(self) -> list[Vertex]:
        return [e.vertex for e in self.entries]

    def total_length(self) -> float:
        return float(sum(e.length for e in self.entries))


class DegenerateCrossing(ValueError):
    """The boundary passes (almost) through a corner of a vertex square."""


def vertex_of(x: float, y: float) -> Vertex:
    """Grid vertex whose square contains the point (half-open squares)."""
    return (math.floor(x + 0.5), math.floor(y + 0.5))


def _line_crossings(a: float, b: float):
    """Parameters in [0, 1] where a -> b crosses the lines k + 1/2, with the step."""
    i0, i1 = math.floor(a + 0.5), math.floor(b + 0.5)
    if i1 == i0:
        return []
    step = 1 if i1 > i0 else -1
    lines = np.arange(i0, i1, step) + 0.5 * step
    return [((x - a) / (b - a), step) for x in lines]


def trace_visits(p: Polygon) -> VisitMapping:
    xy = p.xy
    cum = p.cumulative_lengths
    L = p.perimeter
    n = len(xy)
    events = []  # (arc, axis, step)
    for k in range(n):
        ax, ay = xy[k]
        bx, by = xy[(k + 1) % n]
        seg = cum[k + 1] - cum[k]
        evs = [(t, 0, s) for t, s in _line_crossings(ax, bx)]
        evs += [(t, 1, s) for t, s in _line_crossings(ay, by)]
        evs.sort(key=lambda e: e[0])
        events += [(cum[k] + t * seg, axis, s) for t, axis, s in evs]
    for (s1, a1, _), (s2, a2, _) in zip(events, events[1:] + events[:1]):
        gap = (s2 - s1) % L if len(events) > 1 else L
        if a1 != a2 and gap <= CORNER_TOL:
            raise DegenerateCrossing(f"boundary passes a square corner near arc {s1:.9g}")
    v0 = vertex_of(*xy[0])
    cur = v0
    start = 0.0
    out = []
    for s, axis, step in events:
        out.append(Visit(cur, start, s - start))
        cur = (cur[0] + step, cur[1]) if axis == 0 else (cur[0], cur[1] + step)
        start = s
    out.append(Visit(cur, start, L - start))
    if cur != v0:
        raise InvariantError("square walk did not close up")
    if len(out) > 1 and out[-1].vertex == out[0].vertex:
        last, first = out.pop(), out[0]
        out[0] = Visit(first.vertex, last.start, last.length + first.length)
    return VisitMapping(tuple(out), L)


def remove_duplicates(vm: VisitMapping) -> VisitMapping:
    """Cut out loops between repeated vertices, keeping the chain closed.

    Scanning in chain order, at the first repeat of a vertex ``c`` the two
    loops strictly between the occurrences are compared by total boundary
    length; the shorter one (ties: the one starting at the lexicographically
    smaller vertex) is removed together with the repeat, and its boundary is
    merged into the surviving occurrence.
    """
    L = vm.perimeter
    entries = list(vm.entries)
    removed = list(vm.removed_lengths)
    out: list[Visit] = []
    pos: dict[Vertex, int] = {}
    idx = 0
    while idx < len(entries):
        e = entries[idx]
        if e.vertex not in pos:
            pos[e.vertex] = len(out)
            out.append(e)
            idx += 1
            continue
        k = pos[e.vertex]
        inner = out[k + 1 :]
        outer = entries[idx + 1 :] + out[:k]
        len_in = sum(v.length for v in inner)
        len_out = sum(v.length for v in outer)
        key_in = (len_in, inner[0].vertex if inner else (-math.inf, -math.inf))
        key_out = (len_out, outer[0].vertex if outer else (-math.inf, -math.inf))
        c = out[k]
        if key_in <= key_out:
            removed.append(len_in)
            for v in inner:
                del pos[v.vertex]
            out = out[:k] + [Visit(c.vertex, c.start, c.length + len_in + e.length)]
            idx += 1
        else:
            removed.append(len_out)
            merged = Visit(c.vertex, e.start % L, e.length + len_out + c.length)
            out = [merged] + out[k + 1 :]
            entries = out
            break
    return VisitMapping(tuple(out), L, tuple(removed))


def _ccw(verts: list[Vertex]) -> list[Vertex]:
    xy = np.array(verts, dtype=float)
    nxt = np.roll(xy, -1, axis=0)
    area = (xy[:, 0] * nxt[:, 1] - nxt[:, 0] * xy[:, 1]).sum()
    return verts if area > 0 else [verts[0]] + verts[1:][::-1]


def degenerate_expand(vm: VisitMapping, p: Polygon) -> GridCycle:
    """Turn the duplicate-free chain into a grid cycle.

    Chains of one or two vertices become a unit 4-cycle extended towards a
    boundary point: for one vertex, the quadrant of the boundary vertex
    farthest from it; for two, the side of the point where the boundary
    passes from one square into the other.
    """
    verts = vm.vertices
    if len(verts) >= 4:
        return GridCycle(verts)
    if len(verts) == 1:
        v = verts[0]
        xy = p.xy
        far = xy[int(np.argmax(np.hypot(xy[:, 0] - v[0], xy[:, 1] - v[1])))]
        sx = 1 if far[0] >= v[0] else -1
        sy = 1 if far[1] >= v[1] else -1
        cyc = [v, (v[0] + sx, v[1]), (v[0] + sx, v[1] + sy), (v[0], v[1] + sy)]
        return GridCycle(_ccw(cyc))
    if len(verts) == 2:
        u, v = verts
        cross = p.point_at(vm.entries[1].start)
        if u[1] == v[1]:
            s = 1 if cross[1] >= u[1] else -1
            cyc = [u, v, (v[0], v[1] + s), (u[0], u[1] + s)]
        else:
            s = 1 if cross[0] >= u[0] else -1
            cyc = [u, v, (v[0] + s, v[1]), (u[0] + s, u[1])]
        return GridCycle(_ccw(cyc))
    raise InvariantError(f"duplicate-free chain of {len(verts)} vertices cannot close")


@dataclass(frozen=True)
class FrechetBuild:
    chain: VisitMapping
    cycle: GridCycle
    cells: frozenset
    beta_used: float
    claimed_bound: float
    offset: tuple[float, float] = (0.0, 0.0)
    raw_chain: VisitMapping | None = field(default=None, repr=False)


def _perturbations():
    base = math.atan2(0.6, 0.8)
    golden = math.pi * (3 - math.sqrt(5))
    for k in range(16):
        a = base + k * golden
        yield (PERTURB * math.cos(a), PERTURB * math.sin(a))


def trace_with_perturbation(p: Polygon) -> tuple[VisitMapping, tuple[float, float]]:
    """Trace, nudging a copy of the polygon if it hits a square corner."""
    try:
        return trace_visits(p), (0.0, 0.0)
    except DegenerateCrossing:
        pass
    for off in _perturbations():
        try:
            return trace_visits(p.translate(*off)), off
        except DegenerateCrossing:
            continue
    raise InvariantError("could not perturb the polygon off the square corners")


def construct_frechet(p: Polygon, beta: float | None = None) -> FrechetBuild:
    """Grid polygon whose boundary is within (beta + sqrt 2) / 2 of the polygon
    boundary in Fréchet distance, with beta the sqrt(2)-narrowness of the
    polygon (at least sqrt 2)."""
    if beta is None:
        from .metrics import narrowness

        beta = narrowness(p, SQRT2)[0]
    beta = max(float(beta), SQRT2)
    raw, off = trace_with_perturbation(p)
    chain = remove_duplicates(raw)
    traced = p.translate(*off) if off != (0.0, 0.0) else p
    cycle = degenerate_expand(chain, traced)
    cells = cycle_cells(cycle.vertices)
    if not cells:
        raise InvariantError("grid cycle encloses no cells")
    return FrechetBuild(chain, cycle, cells, beta, (beta + SQRT2) / 2, off, raw)
