"""Exact lattice computations for supersingular Dieudonné lattices of height 4 and dimension 2.

Modules, bottom up: rings (Galois rings GR(p^N, m)), lattice (lattices over
Z/p^N in Howell form), isocrystal (Dieudonné lattices), exterior (wedge^2 N,
the Hodge star, special lattices), qspace (the fixed quadratic space and
vertex lattices), graph (vertex-lattice incidence), quadric (the reduced
quadric of a vertex lattice and its points), kraft (BT_1 words and EO strata),
cli (command line).
"""
from .errors import (ContainmentError, DegenerateError, DomainError, InconsistencyError,
                     PrecisionError, RZError)

__version__ = "0.1.0"

__all__ = ["ContainmentError", "DegenerateError", "DomainError", "InconsistencyError",
           "PrecisionError", "RZError", "__version__"]
