"""Points and divisors on the chain of loops, and v1-reduced coordinates."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import ChainOfLoops, as_fraction, format_fraction
from .errors import InvalidChainError

V1, LOOP, BRIDGE = "v1", "loop", "bridge"


@dataclass(frozen=True, order=True)
class PointOnGamma:
    """A point of the chain: the base point, a loop position, or a bridge offset.

    ``loop(i, x)`` is the point at counterclockwise distance ``x`` from ``v_i``;
    ``bridge(i, t)`` is at distance ``t`` from ``w_i`` along bridge ``i``, with
    ``t = b_i`` being ``v_{i+1}``.
    """

    kind: str
    i: int = 0
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in (V1, LOOP, BRIDGE):
            raise InvalidChainError(f"unknown point kind {self.kind!r}")
        object.__setattr__(self, "offset", as_fraction(self.offset))

    @classmethod
    def v1(cls) -> "PointOnGamma":
        return cls(V1, 0, Fraction(0))

    @classmethod
    def loop(cls, i: int, x) -> "PointOnGamma":
        return cls(LOOP, i, as_fraction(x))

    @classmethod
    def bridge(cls, i: int, t) -> "PointOnGamma":
        return cls(BRIDGE, i, as_fraction(t))

    def validate(self, chain: ChainOfLoops) -> None:
        if self.kind == V1:
            return
        if self.kind == LOOP:
            if not 1 <= self.i <= chain.g:
                raise InvalidChainError(f"loop index {self.i} out of range 1..{chain.g}")
            if not 0 <= self.offset < chain.period(self.i):
                raise InvalidChainError(
                    f"loop offset {self.offset} outside [0, {chain.period(self.i)})"
                )
            return
        if not 1 <= self.i <= chain.g - 1:
            raise InvalidChainError(f"bridge index {self.i} out of range 1..{chain.g - 1}")
        if not 0 < self.offset <= chain.bridges[self.i - 1]:
            raise InvalidChainError(
                f"bridge offset {self.offset} outside (0, {chain.bridges[self.i - 1]}]"
            )

    def to_json(self) -> dict:
        return {"kind": self.kind, "i": self.i, "offset": format_fraction(self.offset)}

    @classmethod
    def from_json(cls, doc: dict) -> "PointOnGamma":
        try:
            return cls(doc["kind"], int(doc.get("i", 0)), as_fraction(doc.get("offset", 0)))
        except (KeyError, TypeError, AttributeError) as exc:
            raise InvalidChainError(f"malformed point {doc!r}") from exc


@dataclass(frozen=True)
class Divisor:
    """A finite formal integer combination of points.

    Repeated points are merged and zero multiplicities dropped, so two
    divisors compare equal exactly when they are the same formal sum.
    """

    chips: tuple[tuple[PointOnGamma, int], ...] = ()

    def __post_init__(self):
        total: Counter = Counter()
        for point, mult in self.chips:
            if not isinstance(mult, int) or isinstance(mult, bool):
                raise InvalidChainError(f"multiplicity must be an integer, got {mult!r}")
            total[point] += mult
        object.__setattr__(
            self, "chips", tuple(sorted((p, k) for p, k in total.items() if k != 0))
        )

    @classmethod
    def from_points(cls, points: Iterable[PointOnGamma]) -> "Divisor":
        return cls(tuple((p, 1) for p in points))

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(self.chips + other.chips)

    def __neg__(self) -> "Divisor":
        return Divisor(tuple((p, -k) for p, k in self.chips))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    @property
    def degree(self) -> int:
        return sum(k for _, k in self.chips)

    def is_effective(self) -> bool:
        return all(k > 0 for _, k in self.chips)

    def validate(self, chain: ChainOfLoops) -> None:
        for point, _ in self.chips:
            point.validate(chain)

    def to_json(self) -> list:
        return [[p.to_json(), k] for p, k in self.chips]

    @classmethod
    def from_json(cls, doc: list) -> "Divisor":
        try:
            return cls(tuple((PointOnGamma.from_json(p), int(k)) for p, k in doc))
        except (TypeError, ValueError) as exc:
            raise InvalidChainError(f"malformed divisor {doc!r}") from exc


@dataclass(frozen=True)
class ReducedDivisor:
    """The v1-reduced coordinates ``(d0, x_1, ..., x_g)`` of a divisor class.

    ``x_i = 0`` means loop ``i`` carries no chip; otherwise there is exactly one
    chip at counterclockwise position ``x_i``.  ``d0`` is the coefficient of
    ``v_1`` and is negative precisely for non-effective classes.
    """

    d0: int
    x: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(as_fraction(v) for v in self.x))

    @property
    def g(self) -> int:
        return len(self.x)

    @property
    def degree(self) -> int:
        return self.d0 + sum(1 for v in self.x if v != 0)

    def chip_loops(self) -> list[int]:
        return [i for i, v in enumerate(self.x, start=1) if v != 0]

    def validate(self, chain: ChainOfLoops) -> None:
        if len(self.x) != chain.g:
            raise InvalidChainError(f"expected {chain.g} coordinates, got {len(self.x)}")
        for i, v in enumerate(self.x, start=1):
            if not 0 <= v < chain.period(i):
                raise InvalidChainError(f"x_{i} = {v} outside [0, {chain.period(i)})")

    def to_divisor(self) -> Divisor:
        """Spell the coordinates out as a formal sum of points."""
        chips = [(PointOnGamma.v1(), self.d0)] if self.d0 else []
        chips += [(PointOnGamma.loop(i, v), 1) for i, v in enumerate(self.x, start=1) if v != 0]
        return Divisor(tuple(chips))

    def to_json(self) -> dict:
        return {"d0": self.d0, "x": [format_fraction(v) for v in self.x]}

    @classmethod
    def from_json(cls, doc: dict) -> "ReducedDivisor":
        try:
            return cls(int(doc["d0"]), tuple(as_fraction(v) for v in doc["x"]))
        except (KeyError, TypeError) as exc:
            raise InvalidChainError(f"malformed reduced divisor {doc!r}") from exc


def degree(divisor: Divisor | ReducedDivisor) -> int:
    return divisor.degree


def canonicalize(chain: ChainOfLoops, divisor: Divisor) -> ReducedDivisor:
    """The unique v1-reduced representative of the class of ``divisor``.

    Computed by Jacobi inversion of the Abel-Jacobi image.  Chips at ``v_i``
    (``loop(i, 0)``, ``i >= 2``) and on bridges land where linear equivalence
    along the bridge sends them: at ``w_{i-1}`` and ``w_i`` respectively.
    """
    from .jacobian import abel_jacobi_divisor, jacobi_invert

    divisor.validate(chain)
    image = abel_jacobi_divisor(chain, divisor)
    return jacobi_invert(chain, image.point, image.degree)
