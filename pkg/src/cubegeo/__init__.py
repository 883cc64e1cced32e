"""Geodesic distances on the surface of the n-dimensional cube.

The metric: shortest path along the cube's surface, with path length measured
in the sup norm of the ambient space.  The package provides

* closed-form distances with explicit provenance and witness polylines
  (:func:`geodesic_distance`),
* the three-route and twelve-route n=3 formulas with their optimality
  conditions (:mod:`cubegeo.adjacent3`, :mod:`cubegeo.opposite3`),
* the general-n candidate enumeration behind those formulas
  (:mod:`cubegeo.candidates`),
* two independent brute-force oracles — a face-sequence linear-program
  optimizer and a king-move grid graph (:mod:`cubegeo.oracle`,
  :mod:`cubegeo.gridgraph`),
* seeded audit drivers tying closed forms to oracles
  (:mod:`cubegeo.audit`) and a command line (``cubegeo``).
"""

from .adjacent3 import AdjacentResult, adjacent3_distance
from .candidates import (
    CandidateAdjacent,
    CandidateOpposite,
    DistanceResult,
    EnumerationCapError,
    Provenance,
    adjacent_candidate_count,
    adjacent_candidates,
    candidate_count,
    candidate_face_sequence,
    counting_remainder,
    geodesic_distance,
    opposite_candidate_count,
    opposite_candidates,
)
from .opposite3 import OppositeResult, opposite3_distance, opposite3_witness
from .oracle import exact_oracle, grid_oracle, restricted_exact_oracle
from .surface import (
    FaceId,
    GeodesicPath,
    SignedPermutation,
    SurfaceError,
    SurfacePoint,
    classify_pair,
    make_surface_point,
    path_length,
    sup_distance,
)

__version__ = "0.1.0"

__all__ = [
    "AdjacentResult",
    "CandidateAdjacent",
    "CandidateOpposite",
    "DistanceResult",
    "EnumerationCapError",
    "FaceId",
    "GeodesicPath",
    "OppositeResult",
    "Provenance",
    "SignedPermutation",
    "SurfaceError",
    "SurfacePoint",
    "__version__",
    "adjacent3_distance",
    "adjacent_candidate_count",
    "adjacent_candidates",
    "candidate_count",
    "candidate_face_sequence",
    "classify_pair",
    "counting_remainder",
    "exact_oracle",
    "geodesic_distance",
    "grid_oracle",
    "make_surface_point",
    "opposite3_distance",
    "opposite3_witness",
    "opposite_candidate_count",
    "opposite_candidates",
    "path_length",
    "restricted_exact_oracle",
    "sup_distance",
]
