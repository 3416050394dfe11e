"""Exact polyhedral engine for fiber polytopes, chamber complexes and refined normal fans,
with the polygon-space (Gelfand-Tsetlin) model of the toric degeneration of M_{0,n}."""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    EmptyPolytopeError,
    NonIntegralLinearizationError,
    NotReducedError,
    OutsideImageError,
    PolyhedralError,
    UnboundedError,
)
from .exact import AffineLattice, affine_hull, kernel_basis, rank, solve_affine
from .fan import Cone, Fan, f_vector, fan_equal, is_complete, normal_fan, refine
from .fiber import (
    ChamberComplex,
    FiberPolytopeResult,
    Projection,
    chamber_complex,
    fiber_over,
    fiber_polytope,
    quotient_polytope,
    refined_fiber_fan,
)
from .models import (
    ehrhart_count,
    gt_pattern_polytope,
    gt_polytope,
    hypersimplex,
    invariant_count,
    kostka,
    nbar_fan,
    parity_lattice,
    phi,
    pi_lambda,
    weight_polytope,
    weyl_dim,
)
from .polytope import (
    HPolytope,
    Polytope,
    VPolytope,
    barycenter,
    dilate,
    dimension,
    faces,
    image,
    intersect,
    lattice_points,
    minkowski_weighted,
    normalized_volume,
    to_h,
    to_v,
)

__all__ = [
    "AffineLattice",
    "BudgetExceededError",
    "ChamberComplex",
    "Cone",
    "DimensionMismatchError",
    "EmptyPolytopeError",
    "Fan",
    "FiberPolytopeResult",
    "HPolytope",
    "NonIntegralLinearizationError",
    "NotReducedError",
    "OutsideImageError",
    "PolyhedralError",
    "Polytope",
    "Projection",
    "UnboundedError",
    "VPolytope",
    "affine_hull",
    "barycenter",
    "chamber_complex",
    "dilate",
    "dimension",
    "ehrhart_count",
    "f_vector",
    "faces",
    "fan_equal",
    "fiber_over",
    "fiber_polytope",
    "gt_pattern_polytope",
    "gt_polytope",
    "hypersimplex",
    "image",
    "intersect",
    "invariant_count",
    "is_complete",
    "kernel_basis",
    "kostka",
    "lattice_points",
    "minkowski_weighted",
    "nbar_fan",
    "normal_fan",
    "normalized_volume",
    "parity_lattice",
    "phi",
    "pi_lambda",
    "quotient_polytope",
    "rank",
    "refine",
    "refined_fiber_fan",
    "solve_affine",
    "to_h",
    "to_v",
    "weight_polytope",
    "weyl_dim",
]
