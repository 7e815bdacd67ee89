import itertools
import math

import numpy as np
import pytest

from gridify.experiments import optimal_baseline
from gridify.fixtures import (
    CombParams,
    brute_force_best_grid_polygon,
    comb_polygon,
    random_simple_polygon,
    thin_sliver,
    valid_subsets,
)
from gridify.geometry import Polygon, is_simple
from gridify.grid import from_mask, is_simply_connected, point_contacts
from gridify.metrics import narrowness, symmetric_difference_area

SQRT2 = math.sqrt(2.0)


def test_comb_params_beta_2():
    cp = CombParams(2.0)
    assert (cp.n, cp.k) == (3, 4)
    assert cp.phi == pytest.approx(math.pi / 2)
    assert cp.side == pytest.approx(SQRT2)
    zz = cp.zigzag()
    assert zz[0] == pytest.approx((0.0, 0.5))
    assert zz[1] == pytest.approx((0.70711, 1.41421), abs=1e-5)
    assert zz[2] == pytest.approx((0.0, 1.5))


@pytest.mark.parametrize("beta,n,k", [(1.5, 3, 10), (3.0, 3, 4), (4.0, 3, 4), (6.0, 5, 4)])
def test_comb_params_rule(beta, n, k):
    cp = CombParams(beta)
    assert (cp.n, cp.k) == (n, k)
    # k is the smallest polygon whose interior angle reaches phi
    assert (k - 2) * math.pi / k >= cp.phi - 1e-12
    assert k == 4 or (k - 3) * math.pi / (k - 1) < cp.phi


def test_comb_requires_beta_above_sqrt2():
    with pytest.raises(ValueError):
        comb_polygon(SQRT2)


@pytest.mark.parametrize("beta", [1.5, 2.0, 3.0, 4.0, 6.0])
def test_comb_is_simple(beta):
    p = comb_polygon(beta)
    assert is_simple(p.vertices)
    zz = CombParams(beta).zigzag()
    for v in zz:
        assert any(np.allclose(v, w) for w in p.vertices)


@pytest.mark.xfail(
    strict=True,
    reason="the literal vertex formulas give a zigzag whose sqrt(2)-narrowness exceeds beta",
)
@pytest.mark.parametrize("beta", [2.0, 3.0])
def test_comb_narrowness_matches_beta(beta):
    measured, _ = narrowness(comb_polygon(beta), SQRT2)
    assert measured == pytest.approx(beta, rel=1e-2)


def test_random_triangle_and_determinism():
    tri = random_simple_polygon(3, 5)
    assert len(tri.vertices) == 3
    a = random_simple_polygon(40, 17)
    b = random_simple_polygon(40, 17)
    assert np.array_equal(a.xy, b.xy)
    assert not np.array_equal(a.xy, random_simple_polygon(40, 18).xy)


def test_many_random_polygons_are_simple():
    for seed in range(1000):
        n = 3 + seed % 20
        p = random_simple_polygon(n, seed)
        assert len(p.vertices) == n
        assert is_simple(p.vertices)


def test_random_polygon_needs_three_vertices():
    with pytest.raises(ValueError):
        random_simple_polygon(2, 0)


def test_sliver_without_turns_is_rectangle():
    p = thin_sliver(5.0, 0.2)
    assert len(p.vertices) == 4
    assert p.area == pytest.approx(1.0)
    assert p.perimeter == pytest.approx(10.4)


@pytest.mark.parametrize("width", [1e-1, 1e-2, 1e-3, 1e-4])
def test_sliver_stays_simple(width):
    assert is_simple(thin_sliver(8.0, width, turns=5).vertices)


def test_sliver_narrowness_grows_with_detour():
    betas = [narrowness(thin_sliver(length, 0.05, turns=3, bend=2.5), SQRT2)[0] for length in (4.0, 8.0, 16.0)]
    assert betas[0] < betas[1] < betas[2]


def test_sliver_rejects_bad_width():
    with pytest.raises(ValueError):
        thin_sliver(1.0, 0.0)


def _valid_subsets_direct(ncols, nrows):
    cells = [(c, r) for c in range(ncols) for r in range(nrows)]
    out = 0
    for k in range(1, len(cells) + 1):
        for combo in itertools.combinations(cells, k):
            s = frozenset(combo)
            if is_simply_connected(s) and not point_contacts(s):
                out += 1
    return out


def test_enumerator_counts():
    assert len(valid_subsets(2, 2)) == 13
    assert len(valid_subsets(2, 1)) == 3
    assert len(valid_subsets(3, 3)) == _valid_subsets_direct(3, 3)


def test_brute_force_examples():
    cell = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    q, v = brute_force_best_grid_polygon(cell, (0, 0, 2, 2))
    assert q == {(0, 0)} and v == pytest.approx(0.0)
    flat = Polygon([(0, 0), (2, 0), (2, 0.5), (0, 0.5)])
    q, v = brute_force_best_grid_polygon(flat, (0, 0, 2, 1))
    assert q == {(0, 0), (1, 0)}
    assert v == pytest.approx(1.0)


def test_brute_force_window_limit():
    cell = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    with pytest.raises(ValueError):
        brute_force_best_grid_polygon(cell, (0, 0, 4, 5))
    with pytest.raises(ValueError):
        brute_force_best_grid_polygon(cell, (0, 0, 2, 2), objective="area")


def test_baseline_not_worse_than_enumeration():
    rng = np.random.default_rng(3)
    for _ in range(10):
        x0, y0 = rng.uniform(0, 0.5, 2)
        p = Polygon([(x0, y0), (x0 + rng.uniform(0.8, 1.5), y0), (x0 + 0.6, y0 + rng.uniform(0.3, 0.9))])
        q, v = brute_force_best_grid_polygon(p, (0, 0, 2, 1))
        assert symmetric_difference_area(p, optimal_baseline(p)) <= v + 1e-12


def test_brute_force_result_is_minimal():
    p = Polygon([(0.1, 0.2), (1.9, 0.1), (1.6, 1.7), (0.3, 1.2)])
    q, v = brute_force_best_grid_polygon(p, (0, 0, 2, 2))
    for mask in valid_subsets(2, 2):
        assert symmetric_difference_area(p, from_mask(mask, 0, 0)) >= v - 1e-12
