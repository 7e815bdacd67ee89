"""Command line entry point: ``gridify <command> [options]``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .geometry import GeometryError
from .grid import InvariantError
from .io import cells_json, parse_cells, parse_polygon, polygon_json

EXIT_OK, EXIT_INVALID, EXIT_INVARIANT = 0, 2, 3

_GLOBAL_DEFAULTS = {"inp": None, "out": None, "seed": 0, "tol": 1e-4, "jobs": 1}


def _global_flags(parser: argparse.ArgumentParser) -> None:
    # SUPPRESS lets the flags appear before or after the subcommand
    g = parser.add_argument_group("global options")
    g.add_argument("--in", dest="inp", default=argparse.SUPPRESS, help="input file (default: stdin)")
    g.add_argument("--out", default=argparse.SUPPRESS, help="output file (default: stdout)")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="metric tolerance")
    g.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")


def _read_input(args) -> str:
    if args.inp in (None, "-"):
        return sys.stdin.read()
    return Path(args.inp).read_text()


def _write_output(args, text: str) -> None:
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)


def _polygon(args):
    return parse_polygon(_read_input(args))


def _cells(path):
    return parse_cells(Path(path).read_text())


def _json(d) -> str:
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


# commands ----------------------------------------------------------------------

def cmd_hausdorff(args) -> None:
    from .hausdorff import PostprocessConfig, construct_hausdorff, postprocess

    p = _polygon(args)
    build = construct_hausdorff(p, args.strategy, args.classifier)
    cells = postprocess(build, p, PostprocessConfig()) if args.post else build.result
    _write_output(args, cells_json(cells))


def cmd_frechet(args) -> None:
    from .frechet import construct_frechet

    fb = construct_frechet(_polygon(args), args.beta)
    doc = {
        "cells": [list(c) for c in sorted(fb.cells)],
        "cycle": [list(v) for v in fb.cycle.vertices],
        "beta": fb.beta_used,
        "bound": fb.claimed_bound,
    }
    _write_output(args, json.dumps(doc) + "\n")


def cmd_baseline(args) -> None:
    from .experiments import optimal_baseline

    _write_output(args, cells_json(optimal_baseline(_polygon(args))))


def cmd_metrics(args) -> None:
    from .grid import boundary_cycle, is_grid_polygon
    from .metrics import frechet_closed, hausdorff_boundary, hausdorff_region, symmetric_difference_area

    p = _polygon(args)
    cells = _cells(args.cells)
    tol = args.tol
    out = {
        "norm_symdiff": symmetric_difference_area(p, cells, normalized=True),
        "symdiff": symmetric_difference_area(p, cells),
    }
    if cells:
        for key, fn, a, b in (
            ("dh_boundary_p_q", hausdorff_boundary, p, cells),
            ("dh_boundary_q_p", hausdorff_boundary, cells, p),
            ("dh_region_p_q", hausdorff_region, p, cells),
            ("dh_region_q_p", hausdorff_region, cells, p),
        ):
            r = fn(a, b, tol)
            out[key] = {"value": r.value, "error_bound": r.error_bound}
    if is_grid_polygon(cells):
        r = frechet_closed(p, boundary_cycle(cells), tol)
        out["frechet"] = {"value": r.value, "error_bound": r.error_bound}
    _write_output(args, _json(out))


def cmd_narrowness(args) -> None:
    from .metrics import narrowness

    beta, w = narrowness(_polygon(args), args.alpha)
    doc = {"alpha": args.alpha, "beta": beta}
    if w is not None:
        doc["witness"] = {
            "p": list(map(float, w.p)),
            "q": list(map(float, w.q)),
            "euclid": w.euclid,
            "along": w.along,
        }
    _write_output(args, _json(doc))


def cmd_fixture(args) -> None:
    from .fixtures import comb_polygon, random_simple_polygon, thin_sliver

    if args.kind == "comb":
        p = comb_polygon(args.beta)
    elif args.kind == "random":
        p = random_simple_polygon(args.n, args.seed)
    else:
        p = thin_sliver(args.length, args.width, args.turns, math.radians(args.angle))
    _write_output(args, polygon_json(p))


def cmd_experiment(args) -> None:
    from .experiments import ExperimentConfig, aggregate, aggregate_csv, generated_corpus, rows_to_csv, run_experiment
    from .io import read_polygon

    cfg = ExperimentConfig.from_dict(json.loads(_read_input(args)))
    if args.polygons:
        corpus = [(Path(f).stem, read_polygon(f)) for f in args.polygons]
    else:
        corpus = generated_corpus(args.corpus_size, args.seed)
    rows = run_experiment(cfg, corpus, jobs=args.jobs)
    _write_output(args, rows_to_csv(rows, include_timing=args.timing))
    if args.aggregate:
        Path(args.aggregate).write_text(aggregate_csv(aggregate(rows)))


def cmd_render(args) -> None:
    from .experiments import render_svg

    p = _polygon(args)
    cells = _cells(args.cells) if args.cells else ()
    _write_output(args, render_svg(p, cells, scale=args.scale))


def cmd_nonogram(args) -> None:
    from .grid import nonogram_text

    _write_output(args, nonogram_text(parse_cells(_read_input(args))))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gridify", description=__doc__)
    _global_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        _global_flags(sp)
        sp.set_defaults(func=func)
        return sp

    sp = add("hausdorff", cmd_hausdorff, "grid polygon with bounded Hausdorff distance")
    sp.add_argument("--strategy", choices=("arbitrary", "greedy_overlap"), default="arbitrary")
    sp.add_argument("--classifier", choices=("trace", "baseline"), default="trace")
    sp.add_argument("--post", action="store_true", help="run add/remove/shift postprocessing")

    sp = add("frechet", cmd_frechet, "grid polygon with bounded Fréchet distance")
    sp.add_argument("--beta", type=float, default=None, help="narrowness to assume (default: measured)")

    add("baseline", cmd_baseline, "cells covered at least half by the polygon")

    sp = add("metrics", cmd_metrics, "distances between a polygon and a cell set")
    sp.add_argument("--cells", required=True, help="cell set JSON")

    sp = add("narrowness", cmd_narrowness, "perimeter distance of close boundary points")
    sp.add_argument("--alpha", type=float, default=math.sqrt(2.0))

    sp = add("fixture", cmd_fixture, "write a test polygon")
    sp.add_argument("kind", choices=("comb", "random", "sliver"))
    sp.add_argument("--beta", type=float, default=2.0)
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--length", type=float, default=10.0)
    sp.add_argument("--width", type=float, default=0.1)
    sp.add_argument("--turns", type=int, default=0)
    sp.add_argument("--angle", type=float, default=0.0, help="heading in degrees")

    sp = add("experiment", cmd_experiment, "run a sweep from a JSON config, write CSV")
    sp.add_argument("polygons", nargs="*", help="polygon files (default: generated corpus)")
    sp.add_argument("--corpus-size", type=int, default=30)
    sp.add_argument("--aggregate", help="also write the per-polygon summary CSV here")
    sp.add_argument("--timing", action="store_true", help="include the runtime column")

    sp = add("render", cmd_render, "SVG of a polygon over its cells")
    sp.add_argument("--cells", help="cell set JSON")
    sp.add_argument("--scale", type=float, default=20.0)

    add("nonogram", cmd_nonogram, "row and column clues of a cell set")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        if args.jobs < 1:
            raise ValueError("--jobs must be at least 1")
        if not args.tol > 0:
            raise ValueError("--tol must be positive")
        args.func(args)
    except InvariantError as exc:
        print(f"gridify: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, GeometryError, OSError, KeyError, TypeError) as exc:
        print(f"gridify: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
