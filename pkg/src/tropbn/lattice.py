"""Lingering lattice paths and the Weyl chamber rank criterion.

Step labels are small integers so that they double as indices into the
direction sets: ``j`` in ``0..r-1`` is a step along ``e_j``, ``r`` is the
diagonal step ``(-1, ..., -1)``, and :data:`LINGER` is a lingering step.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import ChainOfLoops
from .divisors import ReducedDivisor
from .errors import GenericityViolation

LINGER = -1


def in_weyl_chamber(y: Sequence[int]) -> bool:
    """True iff ``y_0 > y_1 > ... > y_{r-1} > 0``."""
    if not y:
        return True
    return all(a > b for a, b in zip(y, y[1:])) and y[-1] > 0


def step_name(label: int, r: int) -> str:
    if label == LINGER:
        return "linger"
    if label == r:
        return "down"
    return f"e{label}"


def parse_step(name: str, r: int) -> int:
    if name == "linger":
        return LINGER
    if name == "down":
        return r
    if name.startswith("e") and name[1:].isdigit() and int(name[1:]) < r:
        return int(name[1:])
    raise ValueError(f"unknown step label {name!r} for r = {r}")


@dataclass(frozen=True)
class LatticePath:
    """A lattice path ``p_0, ..., p_g`` in ``Z^r`` with its step labels."""

    r: int
    points: tuple[tuple[int, ...], ...]
    steps: tuple[int, ...]

    @property
    def g(self) -> int:
        return len(self.steps)

    def directions(self) -> tuple[frozenset[int], ...]:
        """The sets ``A_0, ..., A_r`` of (1-based) loops stepping in each direction."""
        return tuple(
            frozenset(i for i, s in enumerate(self.steps, start=1) if s == j)
            for j in range(self.r + 1)
        )

    def stays_in_chamber(self) -> bool:
        return all(in_weyl_chamber(p) for p in self.points)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "points": [list(p) for p in self.points],
            "steps": [step_name(s, self.r) for s in self.steps],
        }


def lingering_steps(path: LatticePath) -> frozenset[int]:
    return frozenset(i for i, s in enumerate(path.steps, start=1) if s == LINGER)


def _shift(p: tuple[int, ...], label: int, r: int) -> tuple[int, ...]:
    if label == LINGER:
        return p
    if label == r:
        return tuple(c - 1 for c in p)
    return tuple(c + (1 if k == label else 0) for k, c in enumerate(p))


def path_from_steps(d0: int, steps: Sequence[int], r: int) -> LatticePath:
    """Walk a label sequence from ``p_0 = (d0, d0 - 1, ..., d0 - r + 1)``."""
    p = tuple(d0 - j for j in range(r))
    points = [p]
    for label in steps:
        p = _shift(p, label, r)
        points.append(p)
    return LatticePath(r, tuple(points), tuple(steps))


def lingering_path(chain: ChainOfLoops, divisor: ReducedDivisor, r: int) -> LatticePath:
    """The lingering lattice path of a reduced divisor in ``Z^r``.

    Raises
    ------
    GenericityViolation
        If two coordinate directions satisfy the step rule at the same loop.
    """
    if r < 1:
        raise ValueError(f"lattice paths need r >= 1, got {r}")
    divisor.validate(chain)
    p = tuple(divisor.d0 - j for j in range(r))
    points = [p]
    steps = []
    for i in range(1, chain.g + 1):
        x = divisor.x[i - 1]
        if x == 0:
            label = r
        else:
            m, period = chain.m[i - 1], chain.period(i)
            matches = []
            if in_weyl_chamber(p):
                for j in range(r):
                    if x == ((p[j] + 1) * m) % period and in_weyl_chamber(_shift(p, j, r)):
                        matches.append(j)
            if len(matches) > 1:
                raise GenericityViolation(
                    f"loop {i}: directions {matches} all match x_{i} = {x}"
                )
            label = matches[0] if matches else LINGER
        steps.append(label)
        p = _shift(p, label, r)
        points.append(p)
    return LatticePath(r, tuple(points), tuple(steps))


def rank_at_least(chain: ChainOfLoops, divisor: ReducedDivisor, r: int) -> bool:
    if r < 0:
        return True
    if r == 0:
        return divisor.d0 >= 0
    return lingering_path(chain, divisor, r).stays_in_chamber()


def rank(chain: ChainOfLoops, divisor: ReducedDivisor) -> int:
    """Baker-Norine rank of the class, searched upward from 0 up to the degree."""
    if not rank_at_least(chain, divisor, 0):
        return -1
    best = 0
    for r in range(1, max(divisor.degree, 0) + 1):
        if not rank_at_least(chain, divisor, r):
            break
        best = r
    return best
