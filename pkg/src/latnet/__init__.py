"""Interference and throughput in lattice wireless networks.

Closed forms and bounds for the line, square and triangular lattices, a
certified brute-force oracle, and TDMA scheme constructions.
"""
__version__ = "0.1.0"

from .errors import (CapacityError, ConstructionError, DomainError, InvalidNearSetError,  # noqa: E402
                     InvariantError, LatnetError, UnsupportedFamilyError)
from .lattice import Lattice, PathLoss, PeriodicSet, enumerate_points, ring, voronoi_cell  # noqa: E402
from .bounds import (BoundedValue, InterferenceQuery, averaging_lower_bound, interference_oracle,  # noqa: E402
                     radial_upper_bound, ring_averaging_lower_bound, voronoi_upper_bound)
from .specfun import ZetaBoundKind, dirichlet_beta, hurwitz_zeta_ref, lambert_w0, riemann_zeta, zeta_bound  # noqa: E402
from .table import SweepTable  # noqa: E402

__all__ = [
    "__version__",
    "LatnetError", "DomainError", "CapacityError", "UnsupportedFamilyError", "InvalidNearSetError",
    "ConstructionError", "InvariantError",
    "Lattice", "PathLoss", "PeriodicSet", "enumerate_points", "ring", "voronoi_cell",
    "BoundedValue", "InterferenceQuery", "interference_oracle", "voronoi_upper_bound",
    "radial_upper_bound", "averaging_lower_bound", "ring_averaging_lower_bound",
    "ZetaBoundKind", "zeta_bound", "hurwitz_zeta_ref", "riemann_zeta", "dirichlet_beta", "lambert_w0",
    "SweepTable",
]
