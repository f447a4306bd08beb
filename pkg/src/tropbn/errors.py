"""Exception hierarchy shared by every module of the package."""


class TropBNError(Exception):
    """Base class for all errors raised by tropbn."""


class InvalidChainError(TropBNError, ValueError):
    """A chain of loops (or a point or divisor on it) failed validation."""


class GenericityViolation(TropBNError):
    """The edge lengths are not generic enough for the combinatorial theory.

    Raised when two step labels of a lingering lattice path apply at the
    same loop, which cannot happen on a generic chain in the degree range
    the classification covers.
    """


class Degenerate(TropBNError):
    """A tropical intersection was not transverse (shifts were not general)."""


class CapExceeded(TropBNError):
    """A brute-force oracle computation would exceed its configured cap."""
