"""Narrowness of a polygon boundary.

For a distance ``alpha`` the narrowness is the largest distance along the
boundary between two boundary points at Euclidean distance at most
``alpha``.  An optimal pair is either at distance exactly ``alpha`` or splits
the perimeter in half, and in the first case one of the points is a vertex
or both points are equidistant from the intersection of their edge lines.
Each of these candidate families is enumerated over all vertex/edge and
edge/edge pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from ..geometry import Polygon

_DISC_CUTOFF = 1e-12
_ADMIT = 1e-9


@dataclass(frozen=True)
class NarrownessWitness:
    p: tuple[float, float]
    p_arc: float
    q: tuple[float, float]
    q_arc: float
    euclid: float
    along: float


def _cyclic(d: np.ndarray, L: float) -> np.ndarray:
    d = np.mod(d, L)
    return np.minimum(d, L - d)


def _vertex_edge_candidates(xy, e0, dvec, elen, cum, L, alpha):
    """Points of each edge at the boundary of each vertex's alpha-disk, plus
    the point of the disk chord nearest the vertex's antipode."""
    n = len(xy)
    v = xy[:, None, :]
    w = e0[None, :, :] - v
    a = elen[None, :] ** 2
    b = 2 * (dvec[None, :, :] * w).sum(axis=2)
    c = (w * w).sum(axis=2) - alpha * alpha
    disc = b * b - 4 * a * c
    ok = disc >= 0
    root = np.sqrt(np.maximum(disc, 0.0))
    l1 = np.clip((-b - root) / (2 * a), 0.0, 1.0)
    l2 = np.clip((-b + root) / (2 * a), 0.0, 1.0)
    ok &= l1 <= l2
    anti = np.mod(cum[:, None] + L / 2 - cum[None, :], L) / elen[None, :]
    l3 = np.clip(anti, l1, l2)
    vi = np.broadcast_to(np.arange(n)[:, None], (n, n))
    ei = np.broadcast_to(np.arange(n)[None, :], (n, n))
    out = []
    for lam in (l1, l2, l3):
        out.append((vi[ok], ei[ok], lam[ok]))
    va = np.concatenate([o[0] for o in out])
    ea = np.concatenate([o[1] for o in out])
    la = np.concatenate([o[2] for o in out])
    p_arc = cum[va]
    q_arc = cum[ea] + la * elen[ea]
    p = xy[va]
    q = e0[ea] + la[:, None] * dvec[ea]
    return p, p_arc, q, q_arc


def _equidistant_candidates(e0, dvec, elen, cum, alpha):
    """Point pairs at distance alpha, equidistant from the crossing of the two
    edge lines, over all nonparallel edge pairs and sign choices."""
    n = len(e0)
    u = dvec / elen[:, None]
    i, j = np.triu_indices(n, k=1)
    cross = u[i, 0] * u[j, 1] - u[i, 1] * u[j, 0]
    keep = np.abs(cross) > 1e-12
    i, j, cross = i[keep], j[keep], cross[keep]
    # crossing point c = e0[i] + t_i * u_i = e0[j] + t_j * u_j
    r = e0[j] - e0[i]
    ti = (r[:, 0] * u[j, 1] - r[:, 1] * u[j, 0]) / cross
    tj = (r[:, 0] * u[i, 1] - r[:, 1] * u[i, 0]) / cross
    ps, pa, qs, qa = [], [], [], []
    for s1 in (1.0, -1.0):
        for s2 in (1.0, -1.0):
            gap = np.hypot(*(s1 * u[i] - s2 * u[j]).T)
            s = alpha / gap
            li = (ti + s1 * s) / elen[i]
            lj = (tj + s2 * s) / elen[j]
            ok = (li >= 0) & (li <= 1) & (lj >= 0) & (lj <= 1)
            ii, jj, li, lj = i[ok], j[ok], li[ok], lj[ok]
            ps.append(e0[ii] + li[:, None] * dvec[ii])
            qs.append(e0[jj] + lj[:, None] * dvec[jj])
            pa.append(cum[ii] + li * elen[ii])
            qa.append(cum[jj] + lj * elen[jj])
    return np.concatenate(ps), np.concatenate(pa), np.concatenate(qs), np.concatenate(qa)


def _half_perimeter_pair(e0, dvec, elen, cum, L, alpha):
    """First edge pair carrying points within alpha at perimeter distance L/2.

    Along the forward arc from p on edge e to q on edge e', the arc length
    is (1 - lp)|e| + gap + lq|e'|, so fixing it to L/2 makes lq an affine
    function C + R*lp, and the distance condition a quadratic in lp.
    """
    n = len(e0)
    i, j = np.nonzero(~np.eye(n, dtype=bool))
    gap = np.mod(cum[j] - (cum[i] + elen[i]), L)
    R = elen[i] / elen[j]
    C = (L / 2 - elen[i] - gap) / elen[j]
    # lp range keeping lq = C + R lp in [0, 1]
    lo = np.maximum(0.0, -C / R)
    hi = np.minimum(1.0, (1 - C) / R)
    # q - p = c + r lp
    c = e0[j] + C[:, None] * dvec[j] - e0[i]
    r = R[:, None] * dvec[j] - dvec[i]
    qa = (r * r).sum(axis=1)
    qb = 2 * (c * r).sum(axis=1)
    qc = (c * c).sum(axis=1) - alpha * alpha
    disc = qb * qb - 4 * qa * qc
    flat = qa < _DISC_CUTOFF
    with np.errstate(invalid="ignore", divide="ignore"):
        root = np.sqrt(np.maximum(disc, 0.0))
        r1 = (-qb - root) / (2 * qa)
        r2 = (-qb + root) / (2 * qa)
    r1 = np.where(flat, np.where(qc <= 0, -np.inf, np.inf), r1)
    r2 = np.where(flat, np.where(qc <= 0, np.inf, -np.inf), r2)
    solvable = flat | (disc >= -_DISC_CUTOFF)
    a = np.maximum(lo, r1)
    b = np.minimum(hi, r2)
    ok = solvable & (a <= b)
    if not np.any(ok):
        return None
    k = int(np.flatnonzero(ok)[0])
    lp = float(a[k])
    lq = C[k] + R[k] * lp
    ii, jj = i[k], j[k]
    p = e0[ii] + lp * dvec[ii]
    q = e0[jj] + lq * dvec[jj]
    return p, cum[ii] + lp * elen[ii], q, cum[jj] + lq * elen[jj]


def narrowness(p: Polygon, alpha: float) -> tuple[float, NarrownessWitness]:
    """Largest boundary distance between boundary points within ``alpha``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    xy = p.xy
    e0 = xy
    dvec = np.roll(xy, -1, axis=0) - xy
    elen = np.hypot(dvec[:, 0], dvec[:, 1])
    cum = p.cumulative_lengths[:-1]
    L = p.perimeter

    fams = [
        _vertex_edge_candidates(xy, e0, dvec, elen, cum, L, alpha),
        _equidistant_candidates(e0, dvec, elen, cum, alpha),
    ]
    half = _half_perimeter_pair(e0, dvec, elen, cum, L, alpha)
    if half is not None:
        hp, ha, hq, hqa = half
        fams.append((hp[None, :], np.array([ha]), hq[None, :], np.array([hqa])))
    P = np.concatenate([f[0] for f in fams])
    PA = np.concatenate([f[1] for f in fams])
    Q = np.concatenate([f[2] for f in fams])
    QA = np.concatenate([f[3] for f in fams])
    euclid = np.hypot(*(P - Q).T)
    along = _cyclic(PA - QA, L)
    along[euclid > alpha + _ADMIT] = -1.0
    k = int(np.argmax(along))
    along_k = float(min(along[k], L / 2))
    w = NarrownessWitness(
        p=(float(P[k, 0]), float(P[k, 1])),
        p_arc=float(np.mod(PA[k], L)),
        q=(float(Q[k, 0]), float(Q[k, 1])),
        q_arc=float(np.mod(QA[k], L)),
        euclid=float(euclid[k]),
        along=along_k,
    )
    return along_k, w


@njit(cache=True)
def _brute(pts, arcs, L, alpha, cell, x0, y0, gx, gy):
    n = len(pts)
    key = np.empty(n, dtype=np.int64)
    for k in range(n):
        cx = int((pts[k, 0] - x0) / cell)
        cy = int((pts[k, 1] - y0) / cell)
        key[k] = cx * gy + cy
    order = np.argsort(key, kind="mergesort")
    start = np.zeros(gx * gy + 1, dtype=np.int64)
    for k in range(n):
        start[key[k] + 1] += 1
    for k in range(gx * gy):
        start[k + 1] += start[k]
    a2 = alpha * alpha
    best = 0.0
    for k in range(n):
        cx = int((pts[k, 0] - x0) / cell)
        cy = int((pts[k, 1] - y0) / cell)
        for dx in range(-1, 2):
            xx = cx + dx
            if xx < 0 or xx >= gx:
                continue
            for dy in range(-1, 2):
                yy = cy + dy
                if yy < 0 or yy >= gy:
                    continue
                b = xx * gy + yy
                for t in range(start[b], start[b + 1]):
                    o = order[t]
                    if o <= k:
                        continue
                    d = abs(arcs[k] - arcs[o])
                    if d > L - d:
                        d = L - d
                    if d <= best:
                        continue
                    ex = pts[k, 0] - pts[o, 0]
                    ey = pts[k, 1] - pts[o, 1]
                    if ex * ex + ey * ey <= a2:
                        best = d
    return best


def narrowness_bruteforce(p: Polygon, alpha: float, step: float) -> float:
    """Sampling lower bound on the narrowness, error O(step)."""
    if not step > 0:
        raise ValueError("step must be positive")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    pts, arcs = p.sample(step)
    x0, y0 = pts.min(axis=0)
    x1, y1 = pts.max(axis=0)
    cell = alpha
    gx = int((x1 - x0) / cell) + 1
    gy = int((y1 - y0) / cell) + 1
    return float(_brute(pts, arcs, p.perimeter, alpha, cell, x0, y0, gx, gy))
