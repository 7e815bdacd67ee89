"""Turn simple polygons into grid polygons with bounded Hausdorff or Fréchet distance."""

from .frechet import FrechetBuild, construct_frechet
from .geometry import GeometryError, Polygon, clip_area, is_simple
from .grid import (
    GridCycle,
    GridTopologyError,
    InvariantError,
    boundary_cycle,
    is_grid_polygon,
    is_simply_connected,
    nonogram_clues,
    point_contacts,
)
from .hausdorff import HausdorffBuild, PostprocessConfig, construct_hausdorff, postprocess

__all__ = [
    "FrechetBuild",
    "GeometryError",
    "GridCycle",
    "GridTopologyError",
    "HausdorffBuild",
    "InvariantError",
    "Polygon",
    "PostprocessConfig",
    "boundary_cycle",
    "clip_area",
    "construct_frechet",
    "construct_hausdorff",
    "is_grid_polygon",
    "is_simple",
    "is_simply_connected",
    "nonogram_clues",
    "point_contacts",
    "postprocess",
]
