from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from strategies import chain_and_reduced, naive_abel_jacobi
from tropbn.brill_noether import default_neighborhood, neighborhood_point
from tropbn.core import default_chain
from tropbn.divisors import Divisor, PointOnGamma, ReducedDivisor
from tropbn.jacobian import (
    JacobianPoint,
    PicPoint,
    abel_jacobi,
    abel_jacobi_point,
    invert_pic,
    is_effective_class,
    jacobi_invert,
)


def pic(chain, degree, coords):
    return PicPoint(degree, JacobianPoint.of(chain, coords))


def test_point_examples(chain2):
    m1, m2 = chain2.m
    assert abel_jacobi_point(chain2, PointOnGamma.v1()).coords == (0, 0)
    assert abel_jacobi_point(chain2, PointOnGamma.loop(2, m2)).coords == (m1, m2)
    for t in (Fraction(1, 5), Fraction(1)):
        assert abel_jacobi_point(chain2, PointOnGamma.bridge(1, t)).coords == (m1, 0)


def test_reduced_examples(chain2):
    m1, m2 = chain2.m
    L1 = chain2.period(1)
    assert abel_jacobi(chain2, ReducedDivisor(3, (0, 0))) == pic(chain2, 3, [0, 0])
    assert abel_jacobi(chain2, ReducedDivisor(1, (2 * m1, 0))) == pic(chain2, 2, [(2 * m1) % L1, 0])
    w2 = abel_jacobi(chain2, ReducedDivisor(0, (0, m2)))
    assert w2.coords == (m1, m2)
    assert w2.point == abel_jacobi_point(chain2, PointOnGamma.loop(2, m2))


def test_invert_examples(chain2):
    m1, m2 = chain2.m
    l2 = chain2.ell[1]
    assert jacobi_invert(chain2, JacobianPoint.zero(chain2), 4) == ReducedDivisor(4, (0, 0))
    assert jacobi_invert(chain2, JacobianPoint.of(chain2, [2 * m1, 0]), 2) == ReducedDivisor(1, (2 * m1, 0))
    assert jacobi_invert(chain2, JacobianPoint.of(chain2, [m1, -m2]), 1) == ReducedDivisor(0, (0, l2))


def test_effective_class_examples(chain2):
    m1, m2 = chain2.m
    assert is_effective_class(chain2, pic(chain2, 0, [0, 0]))
    assert not is_effective_class(chain2, pic(chain2, -1, [0, 0]))
    assert not is_effective_class(chain2, pic(chain2, -1, [1, Fraction(1, 2)]))
    p = pic(chain2, 1, [m1, Fraction(5, 7) * m2])
    assert invert_pic(chain2, p) == ReducedDivisor(0, (0, Fraction(5, 7) * m2))
    assert is_effective_class(chain2, p)
    # two chips needed, only one available
    assert not is_effective_class(chain2, pic(chain2, 1, [Fraction(1, 2), Fraction(1, 2)]))


@given(chain_and_reduced())
def test_round_trip(pair):
    chain, D = pair
    assert invert_pic(chain, abel_jacobi(chain, D)) == D


@given(chain_and_reduced())
def test_closed_form_matches_path_integration(pair):
    chain, D = pair
    assert abel_jacobi(chain, D).coords == naive_abel_jacobi(chain, D.to_divisor())


@given(st.integers(1, 6), st.data())
def test_homomorphism(g, data):
    chain = default_chain(g)
    _, D1 = data.draw(chain_and_reduced(chains=[chain]))
    _, D2 = data.draw(chain_and_reduced(chains=[chain]))
    lhs = abel_jacobi(chain, invert_pic(chain, abel_jacobi(chain, D1) + abel_jacobi(chain, D2)))
    assert lhs == abel_jacobi(chain, D1) + abel_jacobi(chain, D2)
    total = D1.to_divisor() + D2.to_divisor()
    assert lhs.coords == naive_abel_jacobi(chain, total)


@given(st.integers(1, 6), st.data())
def test_injective_on_reduced_divisors(g, data):
    chain = default_chain(g)
    _, D1 = data.draw(chain_and_reduced(chains=[chain]))
    _, D2 = data.draw(chain_and_reduced(chains=[chain]))
    if D1 != D2:
        assert abel_jacobi(chain, D1) != abel_jacobi(chain, D2)


def test_torus_arithmetic(chain2):
    a = JacobianPoint.of(chain2, [3, 5])
    b = JacobianPoint.of(chain2, [2, 2])
    assert (a + b).coords == (1, 1)
    assert (a - a) == JacobianPoint.zero(chain2)
    assert (3 * b).coords == (2, 0)
    assert JacobianPoint.of(chain2, [-1, 7]).coords == (3, 1)


@given(st.integers(2, 5), st.data())
def test_neighborhood_offsets_move_coordinates_independently(g, data):
    chain = default_chain(g)
    spec = default_neighborhood(chain)
    center = abel_jacobi(chain, ReducedDivisor(g, (0,) * g))
    eps = spec.epsilon
    deltas = data.draw(
        st.lists(st.fractions(-eps / 2, eps / 2, max_denominator=64), min_size=g, max_size=g)
    )
    moved = neighborhood_point(chain, center, spec, deltas)
    # moving a point along loop i changes coordinate i by delta and nothing else
    assert moved.coords == JacobianPoint.of(chain, deltas).coords
    other = neighborhood_point(chain, center, spec, [0] * g)
    assert (moved == other) == all(d == 0 for d in deltas)


def test_neighborhood_rejects_large_offsets():
    chain = default_chain(2)
    spec = default_neighborhood(chain)
    with pytest.raises(ValueError):
        neighborhood_point(chain, abel_jacobi(chain, ReducedDivisor(0, (0, 0))), spec, [spec.epsilon, 0])


def test_bridge_endpoints_are_equivalent(chain2):
    # firing everything past w_1 slides a chip across the bridge
    w1 = PointOnGamma.loop(1, chain2.m[0])
    v2 = PointOnGamma.loop(2, 0)
    D = Divisor(((w1, 1), (v2, -1)))
    assert naive_abel_jacobi(chain2, D) == (0, 0)
