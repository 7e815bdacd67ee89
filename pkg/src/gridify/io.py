"""Reading and writing polygons and cell sets."""

from __future__ import annotations

import json
from pathlib import Path

from .geometry import Polygon
from .grid import cellset


def parse_polygon_text(text: str) -> Polygon:
    """One ``x y`` pair per line; ``#`` starts a comment."""
    pts = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'x y', got {line!r}")
        pts.append((float(parts[0]), float(parts[1])))
    return Polygon(pts)


def parse_polygon(text: str) -> Polygon:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        if "vertices" not in data:
            raise ValueError("polygon JSON needs a 'vertices' list")
        return Polygon([tuple(map(float, v)) for v in data["vertices"]])
    return parse_polygon_text(text)


def read_polygon(path) -> Polygon:
    return parse_polygon(Path(path).read_text())


def polygon_json(p: Polygon) -> str:
    return json.dumps({"vertices": [[float(x), float(y)] for x, y in p.vertices]}) + "\n"


def write_polygon(p: Polygon, path) -> None:
    Path(path).write_text(polygon_json(p))


def cells_json(cells) -> str:
    return json.dumps({"cells": [list(c) for c in sorted(cells)]}) + "\n"


def parse_cells(text: str) -> frozenset:
    data = json.loads(text)
    if "cells" not in data:
        raise ValueError("cell JSON needs a 'cells' list")
    return cellset(data["cells"])


def read_cells(path) -> frozenset:
    return parse_cells(Path(path).read_text())


def write_cells(cells, path) -> None:
    Path(path).write_text(cells_json(cells))
