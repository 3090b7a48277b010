"""Exact continuous guarding of 1.5D terrains.

The pipeline is candidates ``U`` (vertices plus extremal visibility points),
witnesses ``W(U)`` from the visibility overlay, and a set-cover solve over
(U, W(U)).
"""

from .discretization import CandidateSet, CoverageError, WitnessSet, build_candidates, build_witnesses
from .geometry import Point2, Terrain, TerrainError, TerrainPoint, orientation, point_at, validate_terrain
from .io import export_ip, generate_terrain, loads_terrain, dumps_terrain, valley_family
from .setcover import (
    CoverSolution,
    InfeasibleError,
    SetCoverInstance,
    build_instance,
    solve_exact,
    solve_greedy,
    solve_local_search,
    verify_coverage,
)
from .svg import plot_svg
from .visibility import XInterval, VisibilityRegion, sees, visibility_region

__all__ = [
    "CandidateSet", "CoverageError", "WitnessSet", "build_candidates", "build_witnesses",
    "Point2", "Terrain", "TerrainError", "TerrainPoint", "orientation", "point_at", "validate_terrain",
    "export_ip", "generate_terrain", "loads_terrain", "dumps_terrain", "valley_family",
    "CoverSolution", "InfeasibleError", "SetCoverInstance", "build_instance",
    "solve_exact", "solve_greedy", "solve_local_search", "verify_coverage",
    "plot_svg", "XInterval", "VisibilityRegion", "sees", "visibility_region",
]
