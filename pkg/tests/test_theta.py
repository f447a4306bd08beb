import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tropbn.brill_noether import containing_translates, enumerate_cells, sample_vertex_avoiding
from tropbn.core import default_chain, intersection_count, random_rational, rho
from tropbn.divisors import PointOnGamma
from tropbn.errors import Degenerate
from tropbn.jacobian import JacobianPoint, PicPoint, abel_jacobi, abel_jacobi_point, invert_pic
from tropbn.oracle import discrete_rank, discretize, to_discrete
from tropbn.theta import (
    Facet,
    ThetaTranslate,
    contains,
    facets_through,
    intersect_cells_with_translates,
    intersect_translates,
    random_translates,
    theta_facets,
    total_multiplicity,
)


def zero_translate(chain):
    return ThetaTranslate(PicPoint(0, JacobianPoint.zero(chain)))


def test_facets_genus_two(chain2):
    facets = theta_facets(chain2)
    assert facets == (Facet(1, chain2.m[0]), Facet(2, Fraction(0)))


@pytest.mark.parametrize("g", range(1, 7))
def test_facets_are_coordinate_subtori(g):
    chain = default_chain(g)
    facets = theta_facets(chain)
    assert [f.coordinate for f in facets] == list(range(1, g + 1))
    # facet k: chips on every other loop, so n_k = g - k chips lie past loop k
    assert [f.value for f in facets] == [((g - k) * chain.m[k - 1]) % chain.period(k) for k in range(1, g + 1)]
    assert all(f.multiplicity == 1 for f in facets)


@given(st.integers(1, 6), st.data())
def test_translation_equivariance(g, data):
    chain = default_chain(g)
    coords = [data.draw(st.fractions(0, chain.period(k), max_denominator=30)) for k in range(1, g + 1)]
    shift = PicPoint(data.draw(st.integers(-2, 2)), JacobianPoint.of(chain, coords))
    moved = theta_facets(chain, ThetaTranslate(shift))
    base = theta_facets(chain)
    for a, b, s in zip(moved, base, shift.coords):
        assert a.coordinate == b.coordinate
        assert a.value == (b.value + s) % chain.period(a.coordinate)


def test_contains_examples(chain2):
    w1 = PicPoint(1, abel_jacobi_point(chain2, PointOnGamma.loop(1, chain2.m[0])))
    assert contains(chain2, zero_translate(chain2), w1)
    p = PicPoint(1, JacobianPoint.of(chain2, [Fraction(1, 2), Fraction(1, 2)]))
    assert invert_pic(chain2, p).d0 == -1
    assert not contains(chain2, zero_translate(chain2), p)
    with pytest.raises(ValueError):
        contains(chain2, zero_translate(chain2), PicPoint(2, JacobianPoint.zero(chain2)))


@pytest.mark.parametrize("g", [2, 3, 4, 5, 6])
def test_membership_agrees_with_facets(g):
    chain = default_chain(g)
    rng = random.Random(g)
    for _ in range(100):
        translate = random_translates(chain, 1, rng)[0]
        facets = theta_facets(chain, translate)
        coords = [random_rational(rng, 0, chain.period(k), 50) for k in range(1, g + 1)]
        if rng.random() < 0.5:
            f = rng.choice(facets)
            coords[f.coordinate - 1] = f.value
        p = PicPoint(g - 1, JacobianPoint.of(chain, coords))
        on_facet = any(p.coords[f.coordinate - 1] == f.value for f in facets)
        assert contains(chain, translate, p) == on_facet
        assert bool(facets_through(chain, translate, p)) == on_facet


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.data())
def test_membership_agrees_with_chip_firing(g, data):
    chain = default_chain(g)
    graph = discretize(chain)
    coords = [data.draw(st.integers(0, int(chain.period(k)) - 1)) for k in range(1, g + 1)]
    p = PicPoint(g - 1, JacobianPoint.of(chain, coords))
    D = invert_pic(chain, p)
    effective = discrete_rank(graph, to_discrete(graph, D)) >= 0
    assert contains(chain, zero_translate(chain), p) == effective


@pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
def test_theta_power(g):
    chain = default_chain(g)
    rng = random.Random(100 + g)
    for _ in range(10):
        points = intersect_translates(chain, random_translates(chain, g, rng))
        assert len(points) == math.factorial(g)
        assert total_multiplicity(points) == math.factorial(g)
        assert all(p.multiplicity == 1 for p in points)
        assert len({p.point for p in points}) == len(points)


def test_zero_shifts_are_degenerate(chain2):
    with pytest.raises(Degenerate):
        intersect_translates(chain2, [zero_translate(chain2)] * 2)


def test_wrong_translate_count(chain2):
    with pytest.raises(ValueError):
        intersect_translates(chain2, [zero_translate(chain2)])


def test_cells_with_no_translates_are_the_points():
    chain = default_chain(4)
    cells = enumerate_cells(chain, 1, 3)
    points = intersect_cells_with_translates(chain, cells, [])
    assert len(points) == 2
    assert all(p.multiplicity == 1 for p in points)
    assert sorted(p.point.coords for p in points) == sorted(c.point(chain, {}).coords for c in cells)


@pytest.mark.parametrize("g, r, d", [(5, 1, 4), (6, 1, 4), (6, 2, 6), (4, 1, 3), (6, 1, 5)])
def test_bn_intersection_count(g, r, d):
    chain = default_chain(g)
    rng = random.Random(7)
    cells = enumerate_cells(chain, r, d)
    translates = random_translates(chain, rho(g, r, d), rng, degree=d - g + 1)
    points = intersect_cells_with_translates(chain, cells, translates)
    assert total_multiplicity(points) == intersection_count(g, r, d)


def test_bn_intersection_contains_chosen_class():
    chain = default_chain(5)
    rng = random.Random(11)
    for _ in range(5):
        D = sample_vertex_avoiding(chain, 1, 4, rng)
        translates = containing_translates(chain, D, 1, rng)
        points = intersect_cells_with_translates(chain, enumerate_cells(chain, 1, 4), translates)
        assert abel_jacobi(chain, D) in [p.point for p in points]
        assert total_multiplicity(points) == 10


def test_translate_through_fixed_coordinate_is_degenerate():
    chain = default_chain(5)
    cells = enumerate_cells(chain, 1, 4)
    cell = cells[0]
    (k, value), *_ = cell.fixed
    base = theta_facets(chain)[k - 1].value
    coords = [Fraction(0)] * 5
    coords[k - 1] = value - base
    shift = PicPoint(0, JacobianPoint.of(chain, coords))
    with pytest.raises(Degenerate):
        intersect_cells_with_translates(chain, [cell], [ThetaTranslate(shift)])


def test_translate_json():
    chain = default_chain(2)
    t = ThetaTranslate(PicPoint(1, JacobianPoint.of(chain, [Fraction(1, 3), 2])))
    assert t.to_json() == {"shift": {"degree": 1, "coords": ["1/3", "2/1"]}}
    assert t.ambient_degree(chain) == 2
