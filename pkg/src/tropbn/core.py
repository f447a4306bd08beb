"""The chain of loops, its genericity condition, and Brill-Noether numerology.

The metric graph is a chain of ``g`` circles.  Loop ``i`` (1-based) has a top
edge of length ``ell[i-1]`` and a bottom edge of length ``m[i-1]`` joining the
vertices ``v_i`` and ``w_i``; the bridge ``i`` joins ``w_i`` to ``v_{i+1}``.
Positions on loop ``i`` are measured counterclockwise from ``v_i`` in
``[0, ell_i + m_i)`` and ``w_i`` sits at position ``m_i``.

All lengths are :class:`fractions.Fraction`; nothing in this package touches
floating point.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import InvalidChainError

Rational = Fraction


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: a float edge length is almost never the rational
    number the caller had in mind.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidChainError(f"expected an exact rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidChainError(f"cannot parse rational {value!r}") from exc
    raise InvalidChainError(f"expected an exact rational, got {value!r}")


def format_fraction(value: Fraction) -> str:
    """Lowest-terms ``"p/q"`` string (integers come out as ``"p/1"``)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ChainOfLoops:
    """A chain of ``g`` loops with exact rational edge and bridge lengths.

    Parameters
    ----------
    g : int
        Number of loops.
    ell, m : tuple of Fraction
        Top and bottom edge lengths of each loop, all positive.
    bridges : tuple of Fraction
        The ``g - 1`` bridge lengths, all non-negative.  A zero-length bridge
        identifies ``w_i`` with ``v_{i+1}``.
    """

    g: int
    ell: tuple[Fraction, ...]
    m: tuple[Fraction, ...]
    bridges: tuple[Fraction, ...]

    def __post_init__(self):
        if not isinstance(self.g, int) or isinstance(self.g, bool) or self.g < 1:
            raise InvalidChainError(f"g must be a positive integer, got {self.g!r}")
        object.__setattr__(self, "ell", tuple(as_fraction(x) for x in self.ell))
        object.__setattr__(self, "m", tuple(as_fraction(x) for x in self.m))
        object.__setattr__(self, "bridges", tuple(as_fraction(x) for x in self.bridges))
        if len(self.ell) != self.g or len(self.m) != self.g:
            raise InvalidChainError(
                f"expected {self.g} loop lengths, got {len(self.ell)} and {len(self.m)}"
            )
        if len(self.bridges) != self.g - 1:
            raise InvalidChainError(
                f"expected {self.g - 1} bridge lengths, got {len(self.bridges)}"
            )
        for i, (a, b) in enumerate(zip(self.ell, self.m), start=1):
            if a <= 0 or b <= 0:
                raise InvalidChainError(f"non-positive edge length on loop {i}")
        for i, b in enumerate(self.bridges, start=1):
            if b < 0:
                raise InvalidChainError(f"negative length on bridge {i}")

    def period(self, i: int) -> Fraction:
        """Circumference ``ell_i + m_i`` of loop ``i`` (1-based)."""
        return self.ell[i - 1] + self.m[i - 1]

    @property
    def periods(self) -> tuple[Fraction, ...]:
        return tuple(a + b for a, b in zip(self.ell, self.m))

    def lengths(self) -> tuple[Fraction, ...]:
        return self.ell + self.m + self.bridges

    def scaled(self, factor) -> "ChainOfLoops":
        factor = as_fraction(factor)
        return ChainOfLoops(
            self.g,
            tuple(x * factor for x in self.ell),
            tuple(x * factor for x in self.m),
            tuple(x * factor for x in self.bridges),
        )

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "ell": [format_fraction(x) for x in self.ell],
            "m": [format_fraction(x) for x in self.m],
            "bridges": [format_fraction(x) for x in self.bridges],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "ChainOfLoops":
        try:
            return new_chain(doc["g"], doc["ell"], doc["m"], doc["bridges"])
        except (KeyError, TypeError) as exc:
            raise InvalidChainError(f"malformed chain document: {exc}") from exc


def new_chain(g: int, ell: Iterable, m: Iterable, bridges: Iterable = ()) -> ChainOfLoops:
    """Build and validate a chain of loops."""
    return ChainOfLoops(g, tuple(ell), tuple(m), tuple(bridges))


def default_chain(g: int, bridges: bool = True) -> ChainOfLoops:
    """The integer chain with ``m_i = 1`` and ``ell_i = 2g - 2 + i``.

    Each ratio ``ell_i / m_i`` is already in lowest terms with numerator plus
    denominator at least ``2g``, so the chain is always generic.  Bridges have
    length 1, or 0 when ``bridges`` is false.
    """
    return new_chain(
        g,
        [2 * g - 2 + i for i in range(1, g + 1)],
        [1] * g,
        [1 if bridges else 0] * (g - 1),
    )


class GenericityWitness(NamedTuple):
    loop: int
    a: int
    b: int


def check_genericity(chain: ChainOfLoops) -> GenericityWitness | None:
    """Return ``None`` if the chain is generic, else the first offending loop.

    The chain is generic when no ratio ``ell_i / m_i`` equals ``a / b`` for
    positive integers with ``a + b <= 2g - 2``.  Any such ``a / b`` reduces to
    the lowest-terms ``p / q`` with ``p + q <= a + b``, so checking the
    lowest-terms pair is enough; the witness carries that minimal pair.
    """
    bound = 2 * chain.g - 2
    for i, (a, b) in enumerate(zip(chain.ell, chain.m), start=1):
        ratio = a / b
        p, q = ratio.numerator, ratio.denominator
        if p + q <= bound:
            return GenericityWitness(i, p, q)
    return None


def is_generic(chain: ChainOfLoops) -> bool:
    return check_genericity(chain) is None


def rho(g: int, r: int, d: int) -> int:
    """Brill-Noether number ``g - (r + 1)(g - d + r)``; may be negative."""
    return g - (r + 1) * (g - d + r)


def _factorial_ratio_product(r: int, base: int) -> Fraction:
    # prod_{i=0}^{r} i! / (base + i)!
    out = Fraction(1)
    for i in range(r + 1):
        out *= Fraction(math.factorial(i), math.factorial(base + i))
    return out


def lambda_count(g: int, r: int, d: int) -> int:
    """Number of rank ``r`` degree ``d`` classes on a generic chain when rho is 0.

    ``g! * prod_{i=0}^{r} i! / (g - d + r + i)!``
    """
    if rho(g, r, d) != 0:
        raise ValueError(f"lambda_count needs rho = 0, got rho({g},{r},{d}) = {rho(g, r, d)}")
    value = math.factorial(g) * _factorial_ratio_product(r, g - d + r)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral count {value}")
    return value.numerator


def psi(r: int, s: int) -> int:
    """Number of non-lingering rank ``r`` lattice paths with ``(r+1)(s+1)`` steps.

    ``[(r+1)(s+1)]! * prod_{i=0}^{r} i! / (s + 1 + i)!``.  ``s = -1`` is allowed
    and gives the empty path count 1, which is what the cell census needs when
    ``rho = g``.
    """
    if r < 0 or s < -1:
        raise ValueError(f"psi needs r >= 0 and s >= -1, got ({r}, {s})")
    value = math.factorial((r + 1) * (s + 1)) * _factorial_ratio_product(r, s + 1)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral count {value}")
    return value.numerator


def expected_cell_count(g: int, r: int, d: int) -> int:
    """``binomial(g, rho) * psi(r, g - d + r - 1)``, or 0 when rho is out of range."""
    p = rho(g, r, d)
    if p < 0 or p > g:
        return 0
    return math.comb(g, p) * psi(r, g - d + r - 1)


def intersection_count(g: int, r: int, d: int) -> int:
    """Points in ``W^r_d`` meeting rho general theta translates.

    Equal to ``g! prod i!/(g-d+r+i)!``; this is :func:`lambda_count` without
    the rho = 0 restriction.
    """
    p = rho(g, r, d)
    if p < 0:
        return 0
    value = math.factorial(g) * _factorial_ratio_product(r, g - d + r)
    return value.numerator // value.denominator


def random_rational(rng: random.Random, low, high, max_denominator: int = 97) -> Fraction:
    """Uniform-ish rational in ``[low, high)`` with denominator at most ``max_denominator``."""
    low, high = Fraction(low), Fraction(high)
    q = rng.randint(1, max_denominator)
    lo = math.ceil(low * q)
    hi = math.ceil(high * q) - 1
    if hi < lo:
        return low
    return Fraction(rng.randint(lo, hi), q)


def lcm_of_denominators(values: Sequence[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out
