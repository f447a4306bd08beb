"""Special divisors on a generic chain of loops, in exact rational arithmetic."""

from .core import (
    ChainOfLoops,
    check_genericity,
    default_chain,
    lambda_count,
    new_chain,
    psi,
    rho,
)
from .divisors import Divisor, PointOnGamma, ReducedDivisor, canonicalize, degree
from .errors import CapExceeded, Degenerate, GenericityViolation, InvalidChainError, TropBNError
from .jacobian import JacobianPoint, PicPoint, abel_jacobi, abel_jacobi_point, jacobi_invert
from .lattice import LatticePath, in_weyl_chamber, lingering_path, rank, rank_at_least

__version__ = "0.1.0"
