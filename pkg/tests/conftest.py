import numpy as np
import pytest

from gridify.experiments import normalize_position, place, scale_to_resolution
from gridify.fixtures import random_simple_polygon


def scaled_random(n: int, seed: int, r: float = 100.0, offset=(0.0, 0.0)):
    p = random_simple_polygon(n, seed)
    return place(scale_to_resolution(normalize_position(p), r), offset)


def ray_cast_inside(pts, xy) -> np.ndarray:
    """Plain even-odd ray casting, kept separate from the library version."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    n = len(xy)
    for i in range(n):
        x1, y1 = xy[i]
        x2, y2 = xy[(i + 1) % n]
        if y1 == y2:
            continue
        cross = (y1 > y) != (y2 > y)
        xc = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        inside ^= cross & (xc > x)
    return inside


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"acceptance {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
