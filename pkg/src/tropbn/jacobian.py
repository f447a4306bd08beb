"""Abel-Jacobi map, Jacobi inversion, and torus arithmetic on Jac and Pic_d.

``Jac`` is the product of circles ``R / (ell_i + m_i) Z``.  Integrating the
1-form of loop ``k`` along a path from ``v_1`` picks up ``m_k`` for every loop
the path crosses on its way (bottom edge, ``v_k`` to ``w_k``) and the
counterclockwise position on the loop where the path stops.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import ChainOfLoops, as_fraction, format_fraction
from .divisors import BRIDGE, LOOP, V1, Divisor, PointOnGamma, ReducedDivisor
from .errors import InvalidChainError


@dataclass(frozen=True)
class JacobianPoint:
    """A point of ``prod R/(ell_i + m_i)Z`` with coordinates kept in ``[0, period)``."""

    coords: tuple[Fraction, ...]
    periods: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != len(self.periods):
            raise InvalidChainError("coordinate and period counts differ")
        object.__setattr__(
            self,
            "coords",
            tuple(as_fraction(c) % p for c, p in zip(self.coords, self.periods)),
        )

    @classmethod
    def of(cls, chain: ChainOfLoops, coords: Sequence) -> "JacobianPoint":
        if len(coords) != chain.g:
            raise InvalidChainError(f"expected {chain.g} coordinates, got {len(coords)}")
        return cls(tuple(coords), chain.periods)

    @classmethod
    def zero(cls, chain: ChainOfLoops) -> "JacobianPoint":
        return cls.of(chain, [0] * chain.g)

    def __add__(self, other: "JacobianPoint") -> "JacobianPoint":
        self._check(other)
        return JacobianPoint(tuple(a + b for a, b in zip(self.coords, other.coords)), self.periods)

    def __neg__(self) -> "JacobianPoint":
        return JacobianPoint(tuple(-a for a in self.coords), self.periods)

    def __sub__(self, other: "JacobianPoint") -> "JacobianPoint":
        return self + (-other)

    def __mul__(self, n: int) -> "JacobianPoint":
        return JacobianPoint(tuple(n * a for a in self.coords), self.periods)

    __rmul__ = __mul__

    def _check(self, other):
        if self.periods != other.periods:
            raise InvalidChainError("Jacobian points live on different chains")

    def to_json(self) -> dict:
        return {"coords": [format_fraction(c) for c in self.coords]}


@dataclass(frozen=True)
class PicPoint:
    """A degree together with the Abel-Jacobi image (base point ``v_1``)."""

    degree: int
    point: JacobianPoint

    def __add__(self, other: "PicPoint") -> "PicPoint":
        return PicPoint(self.degree + other.degree, self.point + other.point)

    def __neg__(self) -> "PicPoint":
        return PicPoint(-self.degree, -self.point)

    def __sub__(self, other: "PicPoint") -> "PicPoint":
        return self + (-other)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return self.point.coords

    def to_json(self) -> dict:
        return {"degree": self.degree, **self.point.to_json()}


def pic_from_json(chain: ChainOfLoops, doc: dict) -> PicPoint:
    try:
        return PicPoint(int(doc["degree"]), JacobianPoint.of(chain, [as_fraction(c) for c in doc["coords"]]))
    except (KeyError, TypeError) as exc:
        raise InvalidChainError(f"malformed Pic point {doc!r}") from exc


def abel_jacobi_point(chain: ChainOfLoops, p: PointOnGamma) -> JacobianPoint:
    p.validate(chain)
    coords = [Fraction(0)] * chain.g
    if p.kind == V1:
        pass
    elif p.kind == LOOP:
        for k in range(1, p.i):
            coords[k - 1] = chain.m[k - 1]
        coords[p.i - 1] = p.offset
    elif p.kind == BRIDGE:
        for k in range(1, p.i + 1):
            coords[k - 1] = chain.m[k - 1]
    return JacobianPoint.of(chain, coords)


def abel_jacobi_divisor(chain: ChainOfLoops, divisor: Divisor) -> PicPoint:
    """Abel-Jacobi image of an arbitrary divisor, summed chip by chip."""
    total = JacobianPoint.zero(chain)
    for point, mult in divisor.chips:
        total = total + mult * abel_jacobi_point(chain, point)
    return PicPoint(divisor.degree, total)


def abel_jacobi(chain: ChainOfLoops, divisor: ReducedDivisor) -> PicPoint:
    """Closed form on reduced coordinates: coordinate ``i`` is ``n_i m_i + x_i``.

    ``n_i`` counts the loops after ``i`` that carry a chip.
    """
    divisor.validate(chain)
    coords = []
    n = 0
    for i in range(chain.g, 0, -1):
        coords.append(n * chain.m[i - 1] + divisor.x[i - 1])
        if divisor.x[i - 1] != 0:
            n += 1
    coords.reverse()
    return PicPoint(divisor.degree, JacobianPoint.of(chain, coords))


def jacobi_invert(chain: ChainOfLoops, target: JacobianPoint, d: int) -> ReducedDivisor:
    """The unique reduced coordinates of degree ``d`` with image ``target``.

    Solves the triangular system right to left.  Total: a non-effective class
    comes back with ``d0 < 0``.
    """
    if len(target.coords) != chain.g:
        raise InvalidChainError(f"expected {chain.g} coordinates, got {len(target.coords)}")
    x = [Fraction(0)] * chain.g
    n = 0
    for i in range(chain.g, 0, -1):
        x[i - 1] = (target.coords[i - 1] - n * chain.m[i - 1]) % chain.period(i)
        if x[i - 1] != 0:
            n += 1
    return ReducedDivisor(d - n, tuple(x))


def invert_pic(chain: ChainOfLoops, p: PicPoint) -> ReducedDivisor:
    return jacobi_invert(chain, p.point, p.degree)


def is_effective_class(chain: ChainOfLoops, p: PicPoint) -> bool:
    return invert_pic(chain, p).d0 >= 0
