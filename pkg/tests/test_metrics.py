import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import scaled_random
from gridify.fixtures import comb_polygon
from gridify.frechet import construct_frechet
from gridify.geometry import Polygon, distance_to_segments
from gridify.grid import boundary_cycle, boundary_segments
from gridify.hausdorff import construct_hausdorff
from gridify.metrics import (
    frechet_closed,
    frechet_decide,
    hausdorff_boundary,
    hausdorff_boundary_undirected,
    hausdorff_region,
    narrowness,
    narrowness_bruteforce,
    symmetric_difference_area,
)

SQRT2 = math.sqrt(2.0)
UNIT = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def _densify(xy, step):
    """Closed polyline resampled so consecutive points are at most ``step`` apart."""
    out = []
    n = len(xy)
    for i in range(n):
        a, b = xy[i], xy[(i + 1) % n]
        k = max(1, int(math.ceil(np.hypot(*(b - a)) / step)))
        out.extend(a + (b - a) * t for t in np.arange(k) / k)
    return np.array(out)


def _discrete_closed_frechet(a, b):
    """Discrete Fréchet distance of closed point sequences, a pinned at a[0]
    and every rotation of b tried."""
    D = np.hypot(a[:, None, 0] - b[None, :, 0], a[:, None, 1] - b[None, :, 1])
    n, m = D.shape
    best = math.inf
    for s in range(m):
        Ds = np.roll(D, -s, axis=1)
        Ds = np.hstack([Ds, Ds[:, :1]])
        Ds = np.vstack([Ds, Ds[:1]])
        C = np.empty_like(Ds)
        C[0, 0] = Ds[0, 0]
        C[0, 1:] = np.maximum.accumulate(Ds[0, 1:]).clip(min=Ds[0, 0])
        for i in range(1, n + 1):
            C[i, 0] = max(C[i - 1, 0], Ds[i, 0])
            for j in range(1, m + 1):
                C[i, j] = max(min(C[i - 1, j], C[i, j - 1], C[i - 1, j - 1]), Ds[i, j])
        best = min(best, C[n, m])
    return best


# Hausdorff ---------------------------------------------------------------------

def test_hausdorff_boundary_examples():
    assert hausdorff_boundary(UNIT, UNIT).value == pytest.approx(0.0, abs=1e-4)
    moved = UNIT.translate(3.0, 0.0)
    assert hausdorff_boundary(UNIT, moved).value == pytest.approx(3.0, abs=1e-4)
    assert hausdorff_boundary(moved, UNIT).value == pytest.approx(3.0, abs=1e-4)


def test_hausdorff_region_examples():
    inner = Polygon([(0.2, 0.2), (0.8, 0.2), (0.5, 0.9)])
    assert hausdorff_region(inner, UNIT).value == pytest.approx(0.0, abs=1e-4)
    assert hausdorff_region(UNIT, {(0, 0)}).value == pytest.approx(0.0, abs=1e-4)
    assert hausdorff_region({(0, 0)}, UNIT).value == pytest.approx(0.0, abs=1e-4)
    # the region direction ignores interior points that the boundary version sees
    assert hausdorff_region(UNIT, inner).value > 0.2
    assert hausdorff_boundary(inner, UNIT).value > 0.1


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        hausdorff_boundary(UNIT, UNIT, 0.0)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_hausdorff_matches_dense_sampling(seed):
    p = scaled_random(30, seed, offset=(0.3, 0.55))
    q = construct_hausdorff(p).result
    qseg = boundary_segments(q)
    tol = 1e-4
    pts, _ = p.sample(p.perimeter / 100_000)
    sampled = distance_to_segments(pts, qseg).max()
    r = hausdorff_boundary(p, q, tol)
    # the sample misses at most half a step of boundary, and the distance is 1-Lipschitz
    assert sampled <= r.upper + 1e-12
    assert r.value <= sampled + p.perimeter / 200_000 + 1e-12
    assert r.error_bound <= tol

    rng = np.random.default_rng(seed)
    x0, y0, x1, y1 = p.bbox
    cand = rng.uniform([x0, y0], [x1, y1], (300_000, 2))
    cand = cand[p.contains(cand)]
    mask = np.array([(math.floor(x), math.floor(y)) in q for x, y in cand])
    sampled_region = distance_to_segments(cand[~mask], qseg).max() if (~mask).any() else 0.0
    bmask = np.array([(math.floor(x), math.floor(y)) in q for x, y in pts])
    sampled_edge = distance_to_segments(pts[~bmask], qseg).max() if (~bmask).any() else 0.0
    rr = hausdorff_region(p, q, tol)
    assert max(sampled_region, sampled_edge) <= rr.upper + 1e-12
    # random interior samples are about 0.02 apart
    assert rr.value <= max(sampled_region, sampled_edge) + 0.05


@settings(max_examples=15, deadline=None)
@given(st.integers(4, 20), st.integers(0, 10**6))
def test_metrics_scale_linearly(n, seed):
    p = scaled_random(n, seed, r=25.0)
    q = scaled_random(n + 3, seed + 1, r=25.0, offset=(0.5, 0.5))
    tol = 1e-5
    for fn in (hausdorff_boundary, hausdorff_region):
        a = fn(p, q, tol)
        b = fn(p.scale(2.0), q.scale(2.0), 2 * tol)
        assert b.value == pytest.approx(2 * a.value, abs=2 * (a.error_bound + b.error_bound) + 1e-9)
    a = frechet_closed(p, q, tol)
    b = frechet_closed(p.scale(2.0), q.scale(2.0), 2 * tol)
    assert b.value == pytest.approx(2 * a.value, abs=4 * tol + 1e-9)


def test_results_are_reproducible():
    p = scaled_random(20, 4)
    q = construct_hausdorff(p).result
    assert hausdorff_region(q, p) == hausdorff_region(q, p)
    assert frechet_closed(p, boundary_cycle(q)) == frechet_closed(p, boundary_cycle(q))


# Fréchet -----------------------------------------------------------------------

def test_frechet_examples():
    p = scaled_random(12, 9)
    assert frechet_closed(p, p).value <= 1e-4
    a = np.array([(0.0, 0.0), (1.0, 0.0)])
    b = np.array([(0.0, 0.5), (1.0, 0.5)])
    assert frechet_closed(a, b).value == pytest.approx(0.5, abs=1e-4)
    assert frechet_closed(UNIT, UNIT.translate(3, 0)).value == pytest.approx(3.0, abs=1e-4)


def test_frechet_decide_is_monotone():
    p = scaled_random(10, 2, r=16.0)
    q = scaled_random(9, 3, r=16.0)
    d = frechet_closed(p, q, 1e-6).value
    assert not frechet_decide(p.xy, q.xy, d - 1e-3)
    assert frechet_decide(p.xy, q.xy, d + 1e-3)


def test_frechet_orientation_matters():
    tri = np.array([(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)])
    same = frechet_closed(tri, tri[[1, 2, 0]]).value
    reverse = frechet_closed(tri, tri[::-1]).value
    assert same <= 1e-4
    assert reverse > 1.0


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_frechet_against_discrete_oracle(seed):
    a = scaled_random(5, seed, r=4.0)
    b = scaled_random(6, seed + 50, r=4.0, offset=(0.4, 0.2))
    step = 0.1
    da, db = _densify(a.xy, step), _densify(b.xy, step)
    disc = _discrete_closed_frechet(da, db)
    cont = frechet_closed(a, b, 1e-5)
    # densified discrete distance overestimates the continuous one by at most a step
    assert cont.value <= disc + 1e-9
    assert disc <= cont.upper + step


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 15), st.integers(0, 10**6), st.integers(3, 15), st.integers(0, 10**6))
def test_frechet_at_least_hausdorff(n, s1, m, s2):
    p = scaled_random(n, s1, r=16.0)
    q = scaled_random(m, s2, r=16.0)
    tol = 1e-4
    assert frechet_closed(p, q, tol).value >= hausdorff_boundary_undirected(p, q, tol).value - 2 * tol


def test_comb_frechet_range():
    p = comb_polygon(2.0)
    fb = construct_frechet(p, 2.0)
    d = frechet_closed(p, fb.cycle).value
    assert SQRT2 / 4 <= d <= (2 + SQRT2) / 2


# symmetric difference ------------------------------------------------------------

def test_symmetric_difference_examples():
    sq = Polygon([(0, 0), (2, 0), (2, 2), (0, 2)])
    assert symmetric_difference_area(sq, {(0, 0), (1, 0), (0, 1), (1, 1)}) == pytest.approx(0.0)
    rect = Polygon([(0, 0), (2, 0), (2, 1), (0, 1)])
    assert symmetric_difference_area(rect, {(0, 0)}) == pytest.approx(1.0)
    assert symmetric_difference_area(rect, {(0, 0)}, normalized=True) == pytest.approx(0.5)
    assert symmetric_difference_area(rect, set()) == pytest.approx(2.0)


@pytest.mark.parametrize("seed", [0, 1])
def test_symmetric_difference_monte_carlo(seed, rng):
    p = scaled_random(25, seed, r=36.0, offset=(0.2, 0.7))
    q = construct_hausdorff(p).result
    x0, y0, x1, y1 = p.bbox
    lo = np.minimum([x0, y0], np.min(list(q), axis=0)) - 0.5
    hi = np.maximum([x1, y1], np.max(list(q), axis=0) + 1) + 0.5
    pts = rng.uniform(lo, hi, (400_000, 2))
    in_p = p.contains(pts)
    in_q = np.array([(math.floor(x), math.floor(y)) in q for x, y in pts])
    est = (in_p ^ in_q).mean() * np.prod(hi - lo)
    assert symmetric_difference_area(p, q) == pytest.approx(est, rel=0.01)


# narrowness ----------------------------------------------------------------------

SQUARE10 = Polygon([(0, 0), (10, 0), (10, 10), (0, 10)])


def test_square_narrowness():
    beta, w = narrowness(SQUARE10, SQRT2)
    assert beta == pytest.approx(2.0, abs=1e-9)
    assert w.euclid == pytest.approx(SQRT2)
    # equidistant from a corner: one unit along each edge
    corner = min(SQUARE10.vertices, key=lambda c: math.dist(w.p, c))
    assert math.dist(w.p, corner) == pytest.approx(1.0)
    assert math.dist(w.q, corner) == pytest.approx(1.0)


def test_square_narrowness_bruteforce():
    assert narrowness_bruteforce(SQUARE10, SQRT2, 1e-3) == pytest.approx(2.0, abs=5e-3)


def test_convex_long_edges_are_not_narrow():
    hexagon = Polygon([(10 * math.cos(k * math.pi / 3), 10 * math.sin(k * math.pi / 3)) for k in range(6)])
    beta, _ = narrowness(hexagon, SQRT2)
    assert beta < 2 * SQRT2
    assert beta == pytest.approx(narrowness_bruteforce(hexagon, SQRT2, 1e-3), abs=1e-2)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_narrowness_matches_bruteforce(seed):
    p = scaled_random(15, seed, r=36.0)
    beta, w = narrowness(p, SQRT2)
    assert w.euclid <= SQRT2 + 1e-9
    assert beta == pytest.approx(narrowness_bruteforce(p, SQRT2, 1e-3), abs=1e-2 * beta)


@settings(max_examples=20, deadline=None)
@given(st.integers(4, 20), st.integers(0, 10**6), st.floats(0.3, 3.0), st.floats(0.0, 2.0))
def test_narrowness_monotone_in_alpha(n, seed, alpha, extra):
    p = scaled_random(n, seed, r=36.0)
    assert narrowness(p, alpha)[0] <= narrowness(p, alpha + extra)[0] + 1e-9


@pytest.mark.parametrize("shift, expected", [(-1e-6, 2.8120), (1e-6, 3.2624)])
def test_narrowness_comb_jump(shift, expected):
    # two parallel edges of comb(2) sit exactly sqrt2 apart, so the value jumps there
    p = comb_polygon(2.0)
    alpha = math.sqrt(2) + shift
    beta, _ = narrowness(p, alpha)
    brute = narrowness_bruteforce(p, alpha, 1e-4)
    assert beta == pytest.approx(expected, abs=1e-3)
    assert abs(beta - brute) <= 1e-3


def test_narrowness_rejects_bad_alpha():
    with pytest.raises(ValueError):
        narrowness(SQUARE10, 0.0)
