from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toprec.algebra import (Poly, RationalFunction, from_principal_parts,
                            partial_fractions, rational_roots)

F = Fraction


def rf(num, den=None):
    return RationalFunction(Poly(num), Poly(den) if den is not None else None)


def test_gcd_cancellation():
    # (z^2-1)/(z-1) -> z+1
    f = rf([-1, 0, 1], [-1, 1])
    assert f.num == Poly([1, 1])
    assert f.den == Poly([1])


def test_one_over_z_plus_z():
    f = rf([1], [0, 1]) + rf([0, 1])
    assert f == rf([1, 0, 1], [0, 1])


def test_division_by_zero_function():
    with pytest.raises(ZeroDivisionError):
        rf([1]) / rf([0])


def test_canonical_monic_denominator():
    f = rf([1], [0, 2])  # 1/(2z)
    assert f.den == Poly([0, 1])
    assert f.num == Poly([F(1, 2)])


small = st.fractions(min_value=-20, max_value=20, max_denominator=8)


@st.composite
def rationals(draw):
    num = draw(st.lists(small, min_size=0, max_size=4))
    den = draw(st.lists(small, min_size=1, max_size=4).filter(
        lambda c: any(x != 0 for x in c)))
    return rf(num, den)


@settings(max_examples=60, deadline=None)
@given(rationals(), rationals(), rationals())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


def test_shift():
    p = Poly([1, 2, 3])  # 1 + 2z + 3z^2
    q = p.shift(F(1))  # p(z+1) = 6 + 8z + 3z^2
    assert q == Poly([6, 8, 3])


def test_rational_roots_with_multiplicity():
    # z^2 (z-1)^3 (z+1/2) * (z^2+1)
    p = (Poly([0, 1]) ** 2 * Poly([-1, 1]) ** 3 * Poly([F(1, 2), 1])
         * Poly([1, 0, 1]))
    roots, rem = rational_roots(p)
    assert roots == {F(0): 2, F(1): 3, F(-1, 2): 1}
    assert rem == Poly([1, 0, 1])


def test_partial_fractions_simple():
    # 1/(z^2-1) = (1/2)/(z-1) - (1/2)/(z+1)
    f = rf([1], [-1, 0, 1])
    poly, table = partial_fractions(f, [F(1), F(-1)])
    assert poly.is_zero()
    assert table[F(1)] == {1: F(1, 2)}
    assert table[F(-1)] == {1: F(-1, 2)}


def test_partial_fractions_high_order_pole():
    f = rf([1], [0, 0, 0, 0, 1])  # 1/z^4
    poly, table = partial_fractions(f, [F(0)])
    assert poly.is_zero()
    assert table[F(0)] == {4: F(1)}


def test_partial_fractions_poly_part():
    # (z^2+1)/z = z + 1/z
    f = rf([1, 0, 1], [0, 1])
    poly, table = partial_fractions(f, [F(0)])
    assert poly == Poly([0, 1])
    assert table[F(0)] == {1: F(1)}


def test_partial_fractions_unfactorable_rejects():
    f = rf([1], [1, 0, 1])  # poles at +-i
    with pytest.raises(ValueError):
        partial_fractions(f, [F(0)])


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=1, max_size=5),
       st.sampled_from([F(0), F(1), F(-2), F(1, 2)]),
       st.integers(min_value=1, max_value=3))
def test_partial_fractions_round_trip(num, pole, mult):
    den = Poly([-pole, 1]) ** mult * Poly([1, 1, 1])
    f = RationalFunction(Poly(num) * Poly([1, 1, 1]), den)
    poly, table = partial_fractions(f, [pole])
    g = from_principal_parts(poly, table)
    assert g == f
