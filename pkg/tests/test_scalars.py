from fractions import Fraction

import pytest

from toprec.scalars import (EXACT, FLOAT, FloatScalar, MixedBackendError,
                            as_float, is_zero, make_scalar, scalar_from_json,
                            scalar_to_json, scalars_close)


def test_exact_scalars_are_fractions_in_lowest_terms():
    s = make_scalar(Fraction(2, 4))
    assert s == Fraction(1, 2)
    assert s.denominator == 2


def test_float_tolerance_equality():
    a = FloatScalar(1.0, tol=1e-10)
    b = FloatScalar(1.0 + 1e-12)
    assert a == b
    assert not (a == FloatScalar(1.0 + 1e-6))


def test_mixed_backend_arithmetic_raises():
    a = FloatScalar(1.5)
    with pytest.raises(MixedBackendError):
        a + Fraction(1, 2)
    with pytest.raises(MixedBackendError):
        a * 0.25


def test_ints_are_neutral():
    assert FloatScalar(1.5) * 2 == FloatScalar(3.0)
    assert (Fraction(1, 2) + 1) == Fraction(3, 2)


def test_is_zero_semantics():
    assert is_zero(Fraction(0))
    assert not is_zero(Fraction(1, 10 ** 20))
    assert is_zero(FloatScalar(1e-14))
    assert not is_zero(FloatScalar(1e-6))


def test_json_round_trip():
    s = Fraction(-3, 7)
    assert scalar_to_json(s) == "-3/7"
    assert scalar_from_json("-3/7") == s
    f = FloatScalar(0.25)
    assert scalar_to_json(f) == 0.25
    assert scalar_from_json(0.25, backend=FLOAT) == f


def test_scalars_close_across_backends():
    assert scalars_close(Fraction(1, 3), FloatScalar(1 / 3), rel=1e-12)
    assert as_float(Fraction(1, 4)) == 0.25
