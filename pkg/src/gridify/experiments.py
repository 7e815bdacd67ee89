"""Experiment harness: scaling, placement, algorithm sweeps, CSV and SVG output."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .geometry import GeometryError, Polygon, grid_overlap_areas

ALGORITHMS = ("hausdorff_plain", "hausdorff_q4heur", "hausdorff_post", "frechet", "optimal_baseline")
CSV_VERSION = "gridify-experiment-csv v1"
SQRT2 = math.sqrt(2.0)


def scale_to_resolution(p: Polygon, r: float) -> Polygon:
    """Uniform scale about the bounding-box min corner so the box has area ``r``."""
    if not r > 0:
        raise ValueError("resolution must be positive")
    x0, y0, x1, y1 = p.bbox
    area = (x1 - x0) * (y1 - y0)
    if not area > 0:
        raise GeometryError("degenerate bounding box")
    return p.scale(math.sqrt(r / area), origin=(x0, y0))


def place(p: Polygon, offset: tuple[float, float]) -> Polygon:
    dx, dy = offset
    if not (0 <= dx < 1 and 0 <= dy < 1):
        raise ValueError("offset components must lie in [0, 1)")
    return p.translate(dx, dy)


def grid_offsets(steps: int = 5) -> list[tuple[float, float]]:
    """The steps x steps offsets {0, 1/steps, ...}^2."""
    vals = [k / steps for k in range(steps)]
    return [(a, b) for a in vals for b in vals]


def random_offsets(seeds) -> list[tuple[float, float]]:
    out = []
    for s in seeds:
        dx, dy = np.random.default_rng(s).random(2)
        out.append((float(dx), float(dy)))
    return out


def normalize_position(p: Polygon) -> Polygon:
    """Translate so the bounding-box min corner is at the origin."""
    x0, y0, _, _ = p.bbox
    return p.translate(-x0, -y0)


def optimal_baseline(p: Polygon) -> frozenset:
    """All cells at least half covered by the polygon."""
    x0, y0, x1, y1 = p.bbox
    c0, r0 = math.floor(x0), math.floor(y0)
    w = math.floor(x1) - c0 + 1
    h = math.floor(y1) - r0 + 1
    ov = grid_overlap_areas(p, float(c0), float(r0), w, h)
    ii, jj = np.nonzero(ov >= 0.5)
    return frozenset(zip((ii + c0).tolist(), (jj + r0).tolist()))


# configuration and results ----------------------------------------------------

@dataclass
class ExperimentConfig:
    resolutions: list = field(default_factory=lambda: [100.0])
    offsets: object = "grid25"  # "grid25", a list of [dx, dy], or {"random": k}
    seeds: list = field(default_factory=lambda: [0])
    algorithms: list = field(default_factory=lambda: list(ALGORITHMS))
    tol: float = 1e-3
    slack: float = 1e-3
    measure_frechet: bool = True
    measure_hausdorff: bool = True

    def __post_init__(self):
        if not self.resolutions:
            raise ValueError("resolutions must be nonempty")
        if not self.seeds:
            raise ValueError("seeds must be nonempty")
        if not self.algorithms:
            raise ValueError("algorithms must be nonempty")
        bad = set(self.algorithms) - set(ALGORITHMS)
        if bad:
            raise ValueError(f"unknown algorithms {sorted(bad)}")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        return cls(**d)

    def offset_list(self) -> list[tuple[float, float]]:
        if self.offsets == "grid25":
            return grid_offsets(5)
        if isinstance(self.offsets, dict):
            k = int(self.offsets.get("random", 0))
            if k <= 0:
                raise ValueError("random offsets need a positive count")
            return random_offsets([s * 1_000_003 + i for s in self.seeds for i in range(k)])
        offs = [(float(a), float(b)) for a, b in self.offsets]
        if not offs:
            raise ValueError("offsets must be nonempty")
        return offs


@dataclass
class CaseResult:
    polygon: str
    r: float
    dx: float
    dy: float
    algorithm: str
    cells: int = 0
    norm_symdiff: float = math.nan
    dh_boundary_p_q: float = math.nan
    dh_boundary_q_p: float = math.nan
    dh_region_p_q: float = math.nan
    dh_region_q_p: float = math.nan
    frechet: float = math.nan
    beta_measured: float = math.nan
    upper_bound: float = math.nan
    performance_pct: float = math.nan
    runtime_ms: float = math.nan
    error: str = ""

    def key(self):
        return (self.polygon, self.r, self.dx, self.dy, self.algorithm)


def _build(alg: str, p: Polygon, beta: float | None):
    from .frechet import construct_frechet
    from .hausdorff import PostprocessConfig, construct_hausdorff, postprocess

    if alg == "hausdorff_plain":
        return construct_hausdorff(p, "arbitrary").result, None
    if alg == "hausdorff_q4heur":
        return construct_hausdorff(p, "greedy_overlap").result, None
    if alg == "hausdorff_post":
        b = construct_hausdorff(p, "greedy_overlap")
        return postprocess(b, p, PostprocessConfig()), None
    if alg == "frechet":
        fb = construct_frechet(p, beta)
        return fb.cells, fb
    if alg == "optimal_baseline":
        return optimal_baseline(p), None
    raise ValueError(alg)


def run_case(args) -> CaseResult:
    """One (polygon, r, offset, algorithm) case; errors become a row field."""
    from .grid import is_grid_polygon
    from .metrics import frechet_closed, hausdorff_boundary, hausdorff_region, narrowness, symmetric_difference_area

    pid, xy, r, (dx, dy), alg, tol, measure_frechet, measure_hausdorff = args
    res = CaseResult(pid, float(r), float(dx), float(dy), alg)
    try:
        p = place(scale_to_resolution(normalize_position(Polygon(xy)), r), (dx, dy))
        t0 = time.perf_counter()
        beta = None
        if alg == "frechet":
            beta = max(narrowness(p, SQRT2)[0], SQRT2)
        cells, fb = _build(alg, p, beta)
        res.runtime_ms = (time.perf_counter() - t0) * 1000
        res.cells = len(cells)
        res.norm_symdiff = symmetric_difference_area(p, cells, normalized=True)
        if cells and measure_hausdorff:
            res.dh_boundary_p_q = hausdorff_boundary(p, cells, tol).upper
            res.dh_boundary_q_p = hausdorff_boundary(cells, p, tol).upper
            res.dh_region_p_q = hausdorff_region(p, cells, tol).upper
            res.dh_region_q_p = hausdorff_region(cells, p, tol).upper
        if fb is not None:
            res.beta_measured = fb.beta_used
            res.upper_bound = fb.claimed_bound
            if measure_frechet:
                res.frechet = frechet_closed(p, fb.cycle, tol).upper
                res.performance_pct = 100 * res.frechet / res.upper_bound
        elif measure_frechet and alg != "optimal_baseline" and is_grid_polygon(cells):
            from .grid import boundary_cycle

            res.frechet = frechet_closed(p, boundary_cycle(cells), tol).upper
    except Exception as exc:  # recorded per case, the sweep continues
        res.error = f"{type(exc).__name__}: {exc}"
    return res


def run_experiment(cfg: ExperimentConfig, corpus, jobs: int = 1) -> list[CaseResult]:
    """Every (polygon, r, offset, algorithm) case, sorted by that key.

    ``corpus`` is a list of ``(polygon_id, Polygon)``.
    """
    corpus = list(corpus)
    if not corpus:
        raise ValueError("corpus is empty")
    offsets = cfg.offset_list()
    tasks = [
        (pid, poly.xy, float(r), off, alg, cfg.tol, cfg.measure_frechet, cfg.measure_hausdorff)
        for pid, poly in corpus
        for r in cfg.resolutions
        for off in offsets
        for alg in cfg.algorithms
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(run_case, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        rows = [run_case(t) for t in tasks]
    rows.sort(key=CaseResult.key)
    return rows


# aggregation -----------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, float):
        if math.isnan(v):
            return ""
        return repr(v)
    return str(v)


def rows_to_csv(rows, include_timing: bool = False) -> str:
    """CSV text with a version comment line; timings are optional because
    they differ between runs."""
    cols = [f.name for f in fields(CaseResult) if include_timing or f.name != "runtime_ms"]
    buf = io.StringIO()
    buf.write(f"# {CSV_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        d = asdict(row)
        w.writerow([_fmt(d[c]) for c in cols])
    return buf.getvalue()


def mean_by(rows, keys: tuple[str, ...], value: str = "norm_symdiff") -> dict:
    acc: dict = {}
    for row in rows:
        v = getattr(row, value)
        if row.error or v is None or (isinstance(v, float) and math.isnan(v)):
            continue
        acc.setdefault(tuple(getattr(row, k) for k in keys), []).append(v)
    return {k: float(np.mean(v)) for k, v in sorted(acc.items())}


def aggregate(rows) -> list[dict]:
    """Min/avg/max normalized symmetric difference per polygon and algorithm,
    with the increase of the average over the baseline in percent."""
    groups: dict = {}
    for row in rows:
        if row.error or math.isnan(row.norm_symdiff):
            continue
        groups.setdefault((row.polygon, row.algorithm), []).append(row.norm_symdiff)
    base = {pid: float(np.mean(v)) for (pid, alg), v in groups.items() if alg == "optimal_baseline"}
    out = []
    for (pid, alg), vals in sorted(groups.items()):
        avg = float(np.mean(vals))
        b = base.get(pid)
        inc = 100 * (avg - b) / b if b else math.nan
        out.append(
            {
                "polygon": pid,
                "algorithm": alg,
                "min": float(np.min(vals)),
                "avg": avg,
                "max": float(np.max(vals)),
                "increase_pct": inc,
                "cases": len(vals),
            }
        )
    return out


def aggregate_csv(agg) -> str:
    buf = io.StringIO()
    buf.write(f"# {CSV_VERSION} aggregate\n")
    cols = ["polygon", "algorithm", "min", "avg", "max", "increase_pct", "cases"]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for d in agg:
        w.writerow([_fmt(d[c]) for c in cols])
    return buf.getvalue()


# corpus ----------------------------------------------------------------------

_OUTLINES = {
    "house": [(0, 0), (4, 0), (4, 3), (2, 5), (0, 3)],
    "arrow": [(0, 1), (3, 1), (3, 0), (5, 2), (3, 4), (3, 3), (0, 3)],
    "cross": [(1, 0), (2, 0), (2, 1), (3, 1), (3, 2), (2, 2), (2, 3), (1, 3), (1, 2), (0, 2), (0, 1), (1, 1)],
    "ell": [(0, 0), (3, 0), (3, 1), (1, 1), (1, 4), (0, 4)],
    "star": [
        (math.cos(math.pi / 2 + k * math.pi / 5) * (2 if k % 2 == 0 else 0.9),
         math.sin(math.pi / 2 + k * math.pi / 5) * (2 if k % 2 == 0 else 0.9))
        for k in range(10)
    ],
}


def radial_polygon(n: int, seed: int, roughness: float = 0.35) -> Polygon:
    """Star-shaped polygon: sorted random angles with smoothly varying radii."""
    rng = np.random.default_rng(seed)
    ang = np.sort(rng.uniform(0, 2 * math.pi, n))
    k = np.arange(1, 4)
    coef = rng.normal(0, roughness / k, size=(2, len(k)))
    rad = 1 + (coef[0][:, None] * np.cos(np.outer(k, ang)) + coef[1][:, None] * np.sin(np.outer(k, ang))).sum(axis=0)
    rad = np.maximum(rad, 0.2)
    return Polygon(np.column_stack([rad * np.cos(ang), rad * np.sin(ang)]))


def generated_corpus(count: int = 30, seed: int = 0) -> list[tuple[str, Polygon]]:
    """Stand-in corpus: hand outlines, smooth star-shaped and 2-opt polygons."""
    from .fixtures import random_simple_polygon

    out: list[tuple[str, Polygon]] = []
    for name, pts in _OUTLINES.items():
        if len(out) < count:
            out.append((f"outline-{name}", Polygon(pts)))
    rng = np.random.default_rng(seed)
    k = 0
    while len(out) < count:
        n = int(rng.integers(10, 61))
        s = int(rng.integers(0, 2**31))
        if k % 3 == 2:
            out.append((f"random-{n}-{s}", random_simple_polygon(n, s)))
        else:
            out.append((f"radial-{n}-{s}", radial_polygon(n, s)))
        k += 1
    return out


# rendering -------------------------------------------------------------------

def _num(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(p: Polygon | None, cells=(), scale: float = 20.0, margin: float = 1.0) -> str:
    """Cells filled, polygon outlined; y axis points up."""
    cells = sorted(cells)
    xs, ys = [], []
    if p is not None:
        x0, y0, x1, y1 = p.bbox
        xs += [x0, x1]
        ys += [y0, y1]
    for c, r in cells:
        xs += [c, c + 1]
        ys += [r, r + 1]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    vx0, vx1 = min(xs) - margin, max(xs) + margin
    vy0, vy1 = min(ys) - margin, max(ys) + margin
    w, h = vx1 - vx0, vy1 - vy0
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(w * scale)}" height="{_num(h * scale)}" '
        f'viewBox="{_num(vx0)} {_num(-vy1)} {_num(w)} {_num(h)}">',
        '<g fill="#9ecae1" stroke="#3182bd" stroke-width="0.03">',
    ]
    for c, r in cells:
        lines.append(f'<rect x="{c}" y="{-(r + 1)}" width="1" height="1"/>')
    lines.append("</g>")
    if p is not None:
        pts = " ".join(f"{_num(x)},{_num(-y)}" for x, y in p.vertices)
        lines.append(f'<polygon points="{pts}" fill="none" stroke="#d62728" stroke-width="0.05"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
