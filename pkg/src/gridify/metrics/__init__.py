from .frechet import frechet_closed, frechet_decide
from .hausdorff import (
    DistanceResult,
    as_segments,
    hausdorff_boundary,
    hausdorff_boundary_undirected,
    hausdorff_region,
)
from .narrowness import NarrownessWitness, narrowness, narrowness_bruteforce
from .symdiff import cell_overlaps, normalized_symmetric_difference, symmetric_difference_area
