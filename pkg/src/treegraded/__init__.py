"""Exact computations in tree products of metric spaces.

Points are finite descriptors (sequences of steps through plane pieces and a
transversal tree).  The package provides the metric between them, the
homogeneity isometries, geodesics, medians, types of limit directions, and a
finite-scale comparison with the word metric of Z^2 * Z.
"""

from .numeric import Mode
from .pieces import L1_PLANE, L2_PLANE, TREE, PieceSpec, canonical_pair, piece_dist
from .treeprod import (
    CASE1,
    CASE2,
    EMPTY,
    TREE_ALPHA,
    Alpha,
    Descriptor,
    Step,
    concat_normalized,
    concat_raw,
    descriptor,
    dist,
    divergence,
    piece,
    restrict_prefix,
    reverse,
    total_length,
    validate,
)
from .geom import geodesic_point, median, phi, phi_inv
from .qtypes import QType, realize_type, type_of

__version__ = "0.1.0"

__all__ = [
    "Mode", "PieceSpec", "L1_PLANE", "L2_PLANE", "TREE", "canonical_pair", "piece_dist",
    "CASE1", "CASE2", "EMPTY", "TREE_ALPHA", "Alpha", "Descriptor", "Step",
    "concat_normalized", "concat_raw", "descriptor", "dist", "divergence", "piece",
    "restrict_prefix", "reverse", "total_length", "validate",
    "geodesic_point", "median", "phi", "phi_inv", "QType", "realize_type", "type_of",
]
