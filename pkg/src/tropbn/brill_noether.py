"""Cells of ``W^r_d``, vertex avoiding classes, and their local theta equations.

``W^r_d`` of a generic chain is a union of coordinate subtori of ``Pic_d``, one
per lingering lattice path with exactly ``rho`` lingering steps.  On such a
cell the coordinates of lingering loops move freely and every other
coordinate is pinned.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import ChainOfLoops, format_fraction, random_rational, rho
from .divisors import Divisor, PointOnGamma, ReducedDivisor
from .errors import Degenerate, GenericityViolation
from .jacobian import JacobianPoint, PicPoint, abel_jacobi, abel_jacobi_divisor, invert_pic, jacobi_invert
from .lattice import (
    LINGER,
    LatticePath,
    in_weyl_chamber,
    lingering_path,
    lingering_steps,
    path_from_steps,
    rank_at_least,
    step_name,
)
from .theta import ThetaTranslate, contains, effective_cells, facets_through


@dataclass(frozen=True)
class TorusCell:
    """One maximal cell: the pinned coordinates of a rho-lingering path."""

    path: LatticePath
    free: frozenset[int]
    fixed: tuple[tuple[int, Fraction], ...]
    d0: int

    @property
    def fixed_map(self) -> dict[int, Fraction]:
        return dict(self.fixed)

    @property
    def degree(self) -> int:
        return self.d0 + sum(1 for s in self.path.steps if s != self.path.r)

    def label(self) -> str:
        return ",".join(step_name(s, self.path.r) for s in self.path.steps)

    def point(self, chain: ChainOfLoops, free_values: dict[int, Fraction]) -> PicPoint:
        """The class on this cell with the given free coordinates."""
        coords = []
        fixed = self.fixed_map
        for k in range(1, chain.g + 1):
            coords.append(fixed[k] if k in fixed else free_values[k])
        return PicPoint(self.degree, JacobianPoint.of(chain, coords))

    def contains(self, p: PicPoint) -> bool:
        if p.degree != self.degree:
            return False
        return all(p.coords[k - 1] == v for k, v in self.fixed)

    def to_json(self) -> dict:
        return {
            "steps": [step_name(s, self.path.r) for s in self.path.steps],
            "free": sorted(self.free),
            "fixed": {str(k): format_fraction(v) for k, v in self.fixed},
            "d0": self.d0,
        }


@dataclass(frozen=True)
class NeighborhoodSpec:
    """Base points ``p_i`` inside each loop and a radius ``epsilon``.

    ``B(D, epsilon)`` is the set of classes ``D + sum(q_i) - sum(p_i)`` with
    ``q_i`` on the same loop edge as ``p_i`` and within ``epsilon`` of it.
    """

    basepoints: tuple[PointOnGamma, ...]
    epsilon: Fraction

    def validate(self, chain: ChainOfLoops) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        for i, p in enumerate(self.basepoints, start=1):
            if p.kind != "loop" or p.i != i:
                raise ValueError(f"base point {i} must lie on loop {i}")
            x, m = p.offset, chain.m[i - 1]
            gap = min(x, abs(x - m), chain.period(i) - x)
            if gap == 0:
                raise ValueError(f"base point {i} is a vertex")
            if self.epsilon > gap / 2:
                raise ValueError(f"epsilon {self.epsilon} too large for base point {i}")


def default_neighborhood(chain: ChainOfLoops) -> NeighborhoodSpec:
    """Midpoints of the ``ell`` edges and ``epsilon = min(ell_i, m_i) / 4``."""
    points = tuple(
        PointOnGamma.loop(i, chain.m[i - 1] + chain.ell[i - 1] / 2) for i in range(1, chain.g + 1)
    )
    eps = min(min(a, b) for a, b in zip(chain.ell, chain.m)) / 4
    spec = NeighborhoodSpec(points, eps)
    spec.validate(chain)
    return spec


def neighborhood_point(
    chain: ChainOfLoops, center: PicPoint, spec: NeighborhoodSpec, offsets: Sequence[Fraction]
) -> PicPoint:
    """``center + sum(q_i) - sum(p_i)`` with ``q_i`` displaced by ``offsets[i]``."""
    shift = JacobianPoint.zero(chain)
    for p, delta in zip(spec.basepoints, offsets):
        if abs(delta) >= spec.epsilon:
            raise ValueError(f"offset {delta} outside the epsilon ball")
        q = PointOnGamma.loop(p.i, p.offset + delta)
        shift = shift + abel_jacobi_divisor(chain, Divisor.from_points([q])).point
        shift = shift - abel_jacobi_divisor(chain, Divisor.from_points([p])).point
    return PicPoint(center.degree, center.point + shift)


def _fixed_value(chain: ChainOfLoops, path: LatticePath, i: int, n_i: int) -> Fraction:
    label = path.steps[i - 1]
    m, period = chain.m[i - 1], chain.period(i)
    if label == path.r:
        return (n_i * m) % period
    return ((path.points[i - 1][label] + 1 + n_i) * m) % period


def cell_from_path(chain: ChainOfLoops, path: LatticePath, d0: int) -> TorusCell:
    """Pin the non-lingering coordinates of a path, checking step uniqueness."""
    r = path.r
    fixed = {}
    n = 0
    for i in range(chain.g, 0, -1):
        label = path.steps[i - 1]
        if label != LINGER:
            if label != r:
                _check_unique_direction(chain, path, i)
            fixed[i] = _fixed_value(chain, path, i, n)
        if label != r:
            n += 1
    return TorusCell(path, lingering_steps(path), tuple(sorted(fixed.items())), d0)


def _check_unique_direction(chain: ChainOfLoops, path: LatticePath, i: int) -> None:
    p, j = path.points[i - 1], path.steps[i - 1]
    m, period = chain.m[i - 1], chain.period(i)
    x = ((p[j] + 1) * m) % period
    if x == 0:
        raise GenericityViolation(f"loop {i}: the e{j} chip would sit on v_{i}")
    for k in range(path.r):
        if k == j:
            continue
        q = tuple(c + (1 if t == k else 0) for t, c in enumerate(p))
        if in_weyl_chamber(q) and ((p[k] + 1) * m) % period == x:
            raise GenericityViolation(f"loop {i}: directions e{j} and e{k} both match")


def _r0_cells(chain: ChainOfLoops, d: int) -> list[TorusCell]:
    cells = []
    for chips, fixed, d0 in effective_cells(chain, d):
        steps = tuple(LINGER if i in chips else 0 for i in range(1, chain.g + 1))
        path = LatticePath(0, ((),) * (chain.g + 1), steps)
        cells.append(TorusCell(path, chips, tuple(sorted(fixed.items())), d0))
    return cells


def enumerate_cells(chain: ChainOfLoops, r: int, d: int) -> list[TorusCell]:
    """All maximal cells of ``W^r_d``, sorted by their step labels.

    Depth-first search over step labels with the path confined to the open
    Weyl chamber and exactly ``rho`` lingering steps.  ``r = 0`` is read off
    the description of effective classes.
    """
    g = chain.g
    expected_dim = rho(g, r, d)
    if expected_dim < 0 or r < 0:
        return []
    if r == 0:
        return _r0_cells(chain, d)

    found = []
    for downs in range(g + 1):
        d0 = d - (g - downs)
        start = tuple(d0 - j for j in range(r))
        if not in_weyl_chamber(start):
            continue
        steps: list[int] = []

        def walk(p, downs_left, lingers_left):
            remaining = g - len(steps)
            if remaining == 0:
                if downs_left == 0 and lingers_left == 0:
                    found.append((d0, tuple(steps)))
                return
            if downs_left + lingers_left > remaining:
                return
            options = []
            for j in range(r):
                q = tuple(c + (1 if t == j else 0) for t, c in enumerate(p))
                if in_weyl_chamber(q):
                    options.append((j, q))
            if downs_left:
                q = tuple(c - 1 for c in p)
                if in_weyl_chamber(q):
                    options.append((r, q))
            if lingers_left:
                options.append((LINGER, p))
            for label, q in options:
                steps.append(label)
                walk(q, downs_left - (label == r), lingers_left - (label == LINGER))
                steps.pop()

        walk(start, downs, expected_dim)

    cells = [cell_from_path(chain, path_from_steps(d0, s, r), d0) for d0, s in found]
    cells.sort(key=lambda c: [step_name(s, r) for s in c.path.steps])
    return cells


def _require_rank(chain: ChainOfLoops, divisor: ReducedDivisor, r: int) -> LatticePath:
    if r < 1:
        raise ValueError("vertex avoidance is defined here for r >= 1")
    if not rank_at_least(chain, divisor, r):
        raise ValueError(f"divisor does not have rank >= {r}")
    return lingering_path(chain, divisor, r)


def is_vertex_avoiding(chain: ChainOfLoops, divisor: ReducedDivisor, r: int) -> bool:
    """Exactly rho lingering steps, no chip at any ``w_i``, no chip at ``p_{i-1}(j) m_i``."""
    path = _require_rank(chain, divisor, r)
    if len(lingering_steps(path)) != rho(chain.g, r, divisor.degree):
        return False
    for i in range(1, chain.g + 1):
        x, m, period = divisor.x[i - 1], chain.m[i - 1], chain.period(i)
        if x == m % period:
            return False
        if any(x == (path.points[i - 1][j] * m) % period for j in range(r)):
            return False
    return True


def _wg(chain: ChainOfLoops) -> PointOnGamma:
    return PointOnGamma.loop(chain.g, chain.m[-1])


def dj_remainder(chain: ChainOfLoops, divisor: ReducedDivisor, r: int, j: int) -> ReducedDivisor:
    """Reduced form of ``D - j v_1 - (r - j) w_g`` (degree ``d - r``)."""
    if not 0 <= j <= r:
        raise ValueError(f"j must lie in 0..{r}, got {j}")
    cls = abel_jacobi(chain, divisor) - abel_jacobi_divisor(
        chain, Divisor(((PointOnGamma.v1(), j), (_wg(chain), r - j)))
    )
    return invert_pic(chain, cls)


def compute_Dj(chain: ChainOfLoops, divisor: ReducedDivisor, r: int, j: int) -> Divisor:
    """The representative ``D_j ~ D`` containing ``j v_1 + (r - j) w_g``.

    Raises ``AssertionError`` if the remainder is not effective, carries a chip
    at some ``w_i`` or at ``v_1``, or misses a set of loops other than the
    direction set ``A_j``.
    """
    if not is_vertex_avoiding(chain, divisor, r):
        raise ValueError("compute_Dj needs a vertex avoiding class")
    path = lingering_path(chain, divisor, r)
    remainder = dj_remainder(chain, divisor, r, j)
    if remainder.d0 != 0:
        raise AssertionError(f"remainder has {remainder.d0} chips at v_1; expected none")
    for i in remainder.chip_loops():
        if remainder.x[i - 1] == chain.m[i - 1]:
            raise AssertionError(f"remainder has a chip at w_{i}")
    missed = frozenset(i for i in range(1, chain.g + 1) if remainder.x[i - 1] == 0)
    if missed != path.directions()[j]:
        raise AssertionError(f"remainder misses loops {sorted(missed)}, expected {sorted(path.directions()[j])}")
    extra = Divisor(((PointOnGamma.v1(), j), (_wg(chain), r - j)))
    return remainder.to_divisor() + extra


@dataclass(frozen=True)
class LocalEquation:
    """The translate ``Theta + E - E'`` attached to a direction ``i`` and a loop ``j`` in ``A_i``."""

    direction: int
    loop: int
    E: Divisor
    E_prime: Divisor
    translate: ThetaTranslate

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "loop": self.loop,
            "E": self.E.to_json(),
            "E_prime": self.E_prime.to_json(),
            "shift": self.translate.shift.to_json(),
        }


def local_theta_equations(
    chain: ChainOfLoops,
    divisor: ReducedDivisor,
    r: int,
    spec: NeighborhoodSpec | None = None,
) -> list[LocalEquation]:
    """The ``g - rho`` theta translates cutting out ``W^r_d`` near a vertex avoiding class.

    For direction ``i`` (``0..r``) and each loop ``j`` in ``A_i``:
    ``E = i v_1 + (r - i) w_g`` and ``E' = sum of p_k over k in A_i, k != j``.
    """
    if not is_vertex_avoiding(chain, divisor, r):
        raise ValueError("local equations need a vertex avoiding class")
    spec = spec or default_neighborhood(chain)
    path = lingering_path(chain, divisor, r)
    g, d = chain.g, divisor.degree
    expected = g - d + r
    out = []
    for i, A in enumerate(path.directions()):
        if len(A) != expected:
            raise AssertionError(f"|A_{i}| = {len(A)}, expected g - d + r = {expected}")
        E = Divisor(((PointOnGamma.v1(), i), (_wg(chain), r - i)))
        for j in sorted(A):
            E_prime = Divisor.from_points(spec.basepoints[k - 1] for k in sorted(A) if k != j)
            out.append(LocalEquation(i, j, E, E_prime, ThetaTranslate.from_divisors(chain, E, E_prime)))
    return out


def in_all_translates(chain: ChainOfLoops, equations: Sequence[LocalEquation], p: PicPoint) -> bool:
    return all(contains(chain, eq.translate, p) for eq in equations)


def cell_of(chain: ChainOfLoops, divisor: ReducedDivisor, r: int) -> TorusCell:
    """The cell through a class, from its own lingering path."""
    path = lingering_path(chain, divisor, r)
    return cell_from_path(chain, path, divisor.d0)


def containing_translates(
    chain: ChainOfLoops,
    divisor: ReducedDivisor,
    r: int,
    rng: random.Random | None = None,
    max_redraws: int = 16,
    max_denominator: int = 97,
) -> list[ThetaTranslate]:
    """rho theta translates through ``[D]``, each transverse to the cell of ``D``.

    For lingering step ``a``, ``E_a`` is one random point on each loop other
    than ``a`` and the translate is ``Theta + [D - E_a]``.  A draw is kept
    only if ``[D]`` lies on exactly the facet pinning coordinate ``a``.
    """
    if not is_vertex_avoiding(chain, divisor, r):
        raise ValueError("containing_translates needs a vertex avoiding class")
    rng = rng or random.Random(0)
    target = abel_jacobi(chain, divisor)
    path = lingering_path(chain, divisor, r)
    out = []
    for a in sorted(lingering_steps(path)):
        for _ in range(max_redraws):
            points = [
                PointOnGamma.loop(k, random_rational(rng, 0, chain.period(k), max_denominator))
                for k in range(1, chain.g + 1)
                if k != a
            ]
            if any(p.offset == 0 for p in points):
                continue
            E = Divisor.from_points(points)
            translate = ThetaTranslate.from_divisors(chain, divisor.to_divisor(), E)
            if contains(chain, translate, target) and facets_through(chain, translate, target) == [a]:
                out.append(translate)
                break
        else:
            raise Degenerate(f"no transverse translate for lingering loop {a} after {max_redraws} draws")
    return out


def sample_vertex_avoiding(
    chain: ChainOfLoops,
    r: int,
    d: int,
    rng: random.Random,
    max_denominator: int = 97,
    max_tries: int = 1000,
) -> ReducedDivisor:
    """A random vertex avoiding class of rank ``r`` and degree ``d``.

    Picks a random cell and random free coordinates (denominators at most
    ``max_denominator``) and keeps the draw when it is vertex avoiding and its
    own path lingers exactly on the chosen cell's free loops.
    """
    cells = enumerate_cells(chain, r, d)
    if not cells:
        raise ValueError(f"W^{r}_{d} is empty for g = {chain.g}")
    for _ in range(max_tries):
        cell = rng.choice(cells)
        values = {k: random_rational(rng, 0, chain.period(k), max_denominator) for k in cell.free}
        candidate = jacobi_invert(chain, cell.point(chain, values).point, d)
        if not rank_at_least(chain, candidate, r) or not is_vertex_avoiding(chain, candidate, r):
            continue
        if lingering_steps(lingering_path(chain, candidate, r)) != cell.free:
            continue
        return candidate
    raise Degenerate(f"no vertex avoiding class found in {max_tries} draws")
