from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toprec.algebra import Poly, RationalFunction
from toprec.scalars import TruncationError
from toprec.series import INF, LaurentSeries, compose, expand, revert, sqrt_unit

F = Fraction


def rf(num, den=None):
    return RationalFunction(Poly(num), Poly(den) if den is not None else None)


def catalan(n):
    """Independent oracle: C_n = sum C_i C_{n-1-i}."""
    cs = [1]
    for m in range(1, n + 1):
        cs.append(sum(cs[i] * cs[m - 1 - i] for i in range(m)))
    return cs


def test_geometric_expansion():
    s = expand(rf([1], [1, -1]), 0, 4)
    assert s.to_pairs() == [(0, F(1)), (1, F(1)), (2, F(1)), (3, F(1))]


def test_expansion_with_pole():
    # 1/(q^2 (1-q)) at 0: q^-2 + q^-1 + 1 + q + ...
    s = expand(rf([1], [0, 0, 1]) / rf([1, -1]), 0, 2)
    assert s.lo == -2
    assert s.coefficient(-2) == 1
    assert s.coefficient(-1) == 1
    assert s.coefficient(0) == 1
    assert s.coefficient(1) == 1


def test_geometric_oracle_two_scale():
    # 1/(p^2-q^2) in q at 0 with p symbolic: oracle via geometric series in
    # (q/p)^2, checked at p=3: 1/9 + q^2/81 + O(q^4)
    p = F(3)
    f = rf([p * p, 0, -1]) ** -1
    s = expand(f, 0, 4)
    assert s.coefficient(0) == F(1, 9)
    assert s.coefficient(1) == 0
    assert s.coefficient(2) == F(1, 81)


def test_residue_extraction():
    assert expand(rf([1], [0, 1]), 0, 2).residue() == 1
    assert expand(rf([1], [0, 0, 1]), 0, 2).residue() == 0
    # residue in q at 0 of 1/(16 q^3 (p^2-q^2)) at p=2 -> 1/(16 p^4) = 1/256
    p = F(2)
    f = rf([1]) / (16 * rf([0, 0, 0, 1]) * rf([p * p, 0, -1]))
    assert expand(f, 0, 1).residue() == F(1, 256)


def test_residue_truncation_guard():
    s = LaurentSeries(-3, [1, 0, 0], order=-1)
    with pytest.raises(TruncationError):
        s.residue()


def test_expand_at_infinity():
    s = expand(rf([1, 0, 1], [0, 1]), INF, 4)  # (z^2+1)/z = z + 1/z
    assert s.point == INF
    assert s.lo == -1
    assert s.coefficient(-1) == 1  # the z term: w^-1
    assert s.coefficient(1) == 1   # the 1/z term: w^1


def test_revert_identity():
    s = LaurentSeries(1, [1], order=8)
    g = revert(s)
    assert g.coefficient(1) == 1
    assert all(g.coefficient(n) == 0 for n in range(2, 8))


def test_revert_catalan():
    # x = z + 1/z at infinity. In zeta = 1/z: 1/x = zeta/(1+zeta^2); its
    # reversion has coefficients given by the Catalan recurrence.
    cs = catalan(7)
    u = expand(rf([0, 1], [1, 0, 1]), 0, 16)
    zeta = revert(u, 16)
    for n, c in enumerate(cs):
        assert zeta.coefficient(2 * n + 1) == c
    zofx = zeta.inverse()
    assert zofx.coefficient(-1) == 1
    for n in range(7):
        assert zofx.coefficient(2 * n + 1) == -cs[n]


def test_revert_quadratic_oracle():
    # zeta = 2z + z^2  ->  z(zeta) = zeta/2 - zeta^2/8 + zeta^3/16 + O(zeta^4)
    # oracle: substitute and match (the round trip below does the matching)
    s = LaurentSeries(1, [2, 1], order=8)
    g = revert(s, 8)
    assert g.coefficient(1) == F(1, 2)
    assert g.coefficient(2) == F(-1, 8)
    assert g.coefficient(3) == F(1, 16)
    rt = compose(s, g)
    assert rt.coefficient(1) == 1
    assert all(rt.coefficient(n) == 0 for n in range(2, rt.order))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=4),
                min_size=0, max_size=4),
       st.sampled_from([F(1), F(-1), F(2), F(1, 3)]))
def test_revert_round_trip_property(tail, lead):
    s = LaurentSeries(1, [lead] + tail, order=9)
    g = revert(s)
    rt = compose(s, g)
    assert rt.coefficient(1) == 1
    for n in range(2, rt.order):
        assert rt.coefficient(n) == 0


def test_truncation_soundness_of_products():
    a = LaurentSeries(-1, [1, 2, 3], order=2)   # exponents -1..1
    b = LaurentSeries(2, [5, 7], order=4)       # exponents 2..3
    c = a * b
    assert c.order == min(a.order + b.lo, b.order + a.lo)
    with pytest.raises(TruncationError):
        c.coefficient(c.order)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3),
                min_size=1, max_size=4),
       st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=3),
                min_size=1, max_size=4),
       st.integers(min_value=-2, max_value=1),
       st.integers(min_value=-1, max_value=2))
def test_series_ring_axioms(ca, cb, la, lb):
    a = LaurentSeries(la, ca, order=la + 6)
    b = LaurentSeries(lb, cb, order=lb + 6)
    c = LaurentSeries(0, [1, 1], order=5)
    assert (a + b) + c == a + (b + c)
    lhs = a * (b + c)
    rhs = a * b + a * c
    assert lhs == rhs


def test_sqrt_unit():
    # sqrt(1+t) = 1 + t/2 - t^2/8 + t^3/16 + ...
    s = LaurentSeries(0, [1, 1], order=6)
    r = sqrt_unit(s)
    assert r.coefficient(1) == F(1, 2)
    assert r.coefficient(2) == F(-1, 8)
    assert (r * r) == s


def test_expand_residue_matches_partial_fractions():
    from toprec.algebra import partial_fractions
    f = rf([3, 1, 2], [0, -2, 0, 1]) * rf([1], [1, 1])
    poles = [F(0), F(-1)]
    # denominator z(z^2-2)(z+1): restrict to rational poles by multiplying out
    f = rf([3, 1, 2], [0, 1]) * rf([1], [1, 1])
    _, table = partial_fractions(f, poles)
    for a in poles:
        s = expand(f, a, 1)
        assert s.residue() == table.get(a, {}).get(1, F(0))


def test_antiderivative_and_derivative():
    s = expand(rf([1, 0, 2], [0, 0, 1]), 0, 5)  # 1/z^2 + 2
    a = s.antiderivative()
    assert a.coefficient(-1) == -1
    assert a.coefficient(1) == 2
    assert a.derivative() == s.truncate(a.order - 1)
