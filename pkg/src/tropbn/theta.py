"""The tropical theta divisor, its translates, and their stable intersections.

``Theta = W^0_{g-1}`` is a union of ``g`` coordinate codimension-one subtori
of ``Pic_{g-1}``: facet ``k`` is the closure of the classes with a chip on
every loop except loop ``k``.  All facets are coordinate hyperplanes, so a
transverse intersection point of ``g`` of them has multiplicity equal to the
product of the facet weights times the (unit) lattice index of the normals.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import ChainOfLoops, random_rational
from .divisors import Divisor
from .errors import Degenerate
from .jacobian import JacobianPoint, PicPoint, abel_jacobi_divisor, is_effective_class


@dataclass(frozen=True)
class ThetaTranslate:
    """``Theta + shift``: a class ``[D]`` lies on it iff ``[D] - shift`` is effective.

    ``[D] - shift`` must have degree ``g - 1``, so the translate lives in
    ``Pic_{g - 1 + shift.degree}``.  ``provenance`` records ``(E, E')`` when the
    shift was built as ``[E - E']``.
    """

    shift: PicPoint
    provenance: tuple[Divisor, Divisor] | None = None

    @classmethod
    def from_divisors(cls, chain: ChainOfLoops, plus: Divisor, minus: Divisor) -> "ThetaTranslate":
        shift = abel_jacobi_divisor(chain, plus) - abel_jacobi_divisor(chain, minus)
        return cls(shift, (plus, minus))

    def ambient_degree(self, chain: ChainOfLoops) -> int:
        return chain.g - 1 + self.shift.degree

    def to_json(self) -> dict:
        doc = {"shift": self.shift.to_json()}
        if self.provenance is not None:
            doc["E"] = self.provenance[0].to_json()
            doc["E_prime"] = self.provenance[1].to_json()
        return doc


@dataclass(frozen=True)
class Facet:
    """The coordinate subtorus ``y_coordinate = value`` (coordinates 1-based)."""

    coordinate: int
    value: Fraction
    multiplicity: int = 1

    def to_json(self) -> dict:
        return {
            "coordinate": self.coordinate,
            "value": f"{self.value.numerator}/{self.value.denominator}",
            "mult": self.multiplicity,
        }


@dataclass(frozen=True)
class IntersectionPoint:
    point: PicPoint
    multiplicity: int

    def to_json(self) -> dict:
        return {"point": self.point.to_json(), "mult": self.multiplicity}


def effective_cells(chain: ChainOfLoops, d: int) -> list[tuple[frozenset[int], dict[int, Fraction], int]]:
    """Maximal cells of ``W^0_d`` as ``(chip loops, fixed coordinates, d0)``.

    For ``0 <= d <= g`` a maximal cell puts one chip on each loop of a
    ``d``-subset ``S``; coordinate ``k`` outside ``S`` is pinned at
    ``n_k m_k`` where ``n_k`` counts the loops of ``S`` after ``k``.  For
    ``d > g`` the whole of ``Pic_d`` is effective.
    """
    if d < 0:
        return []
    g = chain.g
    if d >= g:
        return [(frozenset(range(1, g + 1)), {}, d - g)]
    cells = []
    for subset in itertools.combinations(range(1, g + 1), d):
        chips = frozenset(subset)
        fixed = {}
        for k in range(1, g + 1):
            if k not in chips:
                n_k = sum(1 for j in chips if j > k)
                fixed[k] = (n_k * chain.m[k - 1]) % chain.period(k)
        cells.append((chips, fixed, 0))
    return cells


def theta_facets(chain: ChainOfLoops, translate: ThetaTranslate | None = None) -> tuple[Facet, ...]:
    """The ``g`` facets of ``Theta + shift``, indexed by their fixed coordinate."""
    shift = translate.shift.coords if translate is not None else (Fraction(0),) * chain.g
    facets = {}
    for chips, fixed, _ in effective_cells(chain, chain.g - 1):
        ((k, value),) = fixed.items()
        facets[k] = Facet(k, (value + shift[k - 1]) % chain.period(k), 1)
    return tuple(facets[k] for k in range(1, chain.g + 1))


def contains(chain: ChainOfLoops, translate: ThetaTranslate, p: PicPoint) -> bool:
    """Membership by Jacobi inversion of ``p - shift`` at degree ``g - 1``."""
    if p.degree - translate.shift.degree != chain.g - 1:
        raise ValueError(
            f"degree mismatch: point of degree {p.degree} against a translate of "
            f"Pic_{translate.ambient_degree(chain)}"
        )
    return is_effective_class(chain, p - translate.shift)


def facets_through(chain: ChainOfLoops, translate: ThetaTranslate, p: PicPoint) -> list[int]:
    """Coordinates ``k`` whose facet of the translate passes through ``p``."""
    return [f.coordinate for f in theta_facets(chain, translate) if p.coords[f.coordinate - 1] == f.value]


def _lattice_index(normals: Sequence[Sequence[int]]) -> int:
    """|det| of the integer normal vectors, by exact elimination."""
    rows = [[Fraction(v) for v in row] for row in normals]
    n = len(rows)
    det = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if rows[i][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for i in range(col + 1, n):
            factor = rows[i][col] / rows[col][col]
            rows[i] = [a - factor * b for a, b in zip(rows[i], rows[col])]
    return abs(int(det))


def _unit(k: int, g: int) -> list[int]:
    return [1 if i == k else 0 for i in range(1, g + 1)]


def _check_distinct_values(facet_lists, coordinates: Iterable[int], what: str) -> None:
    for k in coordinates:
        values = [facets[k - 1].value for facets in facet_lists]
        if len(set(values)) < len(values):
            raise Degenerate(f"{what}: two translates share the facet y_{k} = {values}")


def intersect_translates(chain: ChainOfLoops, translates: Sequence[ThetaTranslate]) -> list[IntersectionPoint]:
    """Stable intersection of exactly ``g`` theta translates.

    Every way of sending the translates to distinct coordinates picks one facet
    from each and pins every coordinate once, giving one point.  If two
    translates share a facet value the intersection is not transverse and
    :class:`Degenerate` is raised.
    """
    g = chain.g
    if len(translates) != g:
        raise ValueError(f"need exactly {g} translates, got {len(translates)}")
    degrees = {t.ambient_degree(chain) for t in translates}
    if len(degrees) != 1:
        raise ValueError(f"translates live in different Pic degrees {sorted(degrees)}")
    (degree,) = degrees
    facet_lists = [theta_facets(chain, t) for t in translates]
    _check_distinct_values(facet_lists, range(1, g + 1), "intersect_translates")

    found: dict[tuple, IntersectionPoint] = {}
    for assignment in itertools.permutations(range(1, g + 1)):
        coords = [None] * g
        weight = 1
        for facets, k in zip(facet_lists, assignment):
            coords[k - 1] = facets[k - 1].value
            weight *= facets[k - 1].multiplicity
        weight *= _lattice_index([_unit(k, g) for k in assignment])
        point = PicPoint(degree, JacobianPoint.of(chain, coords))
        if point.coords in found:
            raise Degenerate(f"two facet assignments meet at {point.coords}")
        found[point.coords] = IntersectionPoint(point, weight)
    for hit in found.values():
        for t in translates:
            if not contains(chain, t, hit.point):
                raise AssertionError(f"intersection point {hit.point} missing from {t}")
    return sorted(found.values(), key=lambda h: h.point.coords)


def intersect_cells_with_translates(
    chain: ChainOfLoops, cells: Sequence, translates: Sequence[ThetaTranslate]
) -> list[IntersectionPoint]:
    """Intersect cells of ``W^r_d`` with as many theta translates as free coordinates.

    ``cells`` are :class:`~tropbn.brill_noether.TorusCell` values.  On each cell
    the translates are matched bijectively to the free coordinates; a translate
    whose facet coincides with one of the cell's pinned coordinates, or two
    translates pinning a free coordinate to the same value, make the
    intersection non-transverse and raise :class:`Degenerate`.
    """
    facet_lists = [theta_facets(chain, t) for t in translates]
    found: dict[tuple, IntersectionPoint] = {}
    for cell in cells:
        free = sorted(cell.free)
        if len(free) != len(translates):
            raise ValueError(f"cell has {len(free)} free coordinates, got {len(translates)} translates")
        degree = cell.degree
        for t in translates:
            if t.ambient_degree(chain) != degree:
                raise ValueError(f"translate lives in Pic_{t.ambient_degree(chain)}, cell in Pic_{degree}")
        fixed = cell.fixed_map
        for facets in facet_lists:
            for k, value in fixed.items():
                if facets[k - 1].value == value:
                    raise Degenerate(f"a translate contains the whole cell {cell.label()} along y_{k}")
        _check_distinct_values(facet_lists, free, f"cell {cell.label()}")
        for order in itertools.permutations(free):
            coords = [fixed.get(k) for k in range(1, chain.g + 1)]
            weight = 1
            for facets, k in zip(facet_lists, order):
                coords[k - 1] = facets[k - 1].value
                weight *= facets[k - 1].multiplicity
            normals = [_unit(k, chain.g) for k in fixed] + [_unit(k, chain.g) for k in order]
            weight *= _lattice_index(normals)
            point = PicPoint(degree, JacobianPoint.of(chain, coords))
            if point.coords in found:
                raise Degenerate(f"intersection point {point.coords} reached twice")
            found[point.coords] = IntersectionPoint(point, weight)
    for hit in found.values():
        for t in translates:
            if not contains(chain, t, hit.point):
                raise AssertionError(f"intersection point {hit.point} missing from {t}")
    return sorted(found.values(), key=lambda h: h.point.coords)


def random_shift(chain: ChainOfLoops, rng, degree: int = 0, max_denominator: int = 97) -> PicPoint:
    coords = [random_rational(rng, 0, chain.period(k), max_denominator) for k in range(1, chain.g + 1)]
    return PicPoint(degree, JacobianPoint.of(chain, coords))


def random_translates(chain: ChainOfLoops, count: int, rng, degree: int = 0, max_denominator: int = 97):
    return [ThetaTranslate(random_shift(chain, rng, degree, max_denominator)) for _ in range(count)]


def total_multiplicity(points: Iterable[IntersectionPoint]) -> int:
    return sum(p.multiplicity for p in points)


def expected_theta_power(g: int) -> int:
    """``Theta^g = g!`` for a principal polarisation."""
    return math.factorial(g)
