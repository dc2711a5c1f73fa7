"""Scalar coefficients: one abstraction, two backends.

Exact backend coefficients are plain :class:`fractions.Fraction` (always in
lowest terms with positive denominator, which the stdlib guarantees).  Float
backend coefficients are :class:`FloatScalar`: a double (real or complex)
carrying the comparison tolerance.  The two never mix silently; any arithmetic
between them raises :class:`MixedBackendError`.

Plain Python ints are backend-neutral literals and combine with either side.
"""

from __future__ import annotations

from fractions import Fraction

EXACT = "exact"
FLOAT = "float"

DEFAULT_TOL = 1e-10


class MixedBackendError(TypeError):
    """Raised when exact and float scalars meet in one expression."""


class TruncationError(ValueError):
    """Raised when a series coefficient beyond the provable order is needed."""


def _reject_mixed(other):
    if isinstance(other, (Fraction, float, complex)):
        raise MixedBackendError(
            "cannot mix float-backend scalars with %r" % (other,))
    return NotImplemented


class FloatScalar:
    """A float (or complex) value with an attached comparison tolerance.

    Equality is approximate: ``a == b`` iff ``|a-b| <= tol * max(1, |a|, |b|)``.
    Truthiness is exact (used by kernels to skip structural zeros); use
    :func:`is_zero` for tolerance-aware zero tests.
    """

    __slots__ = ("v", "tol")
    __hash__ = None

    def __init__(self, v, tol=DEFAULT_TOL):
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        self.v = complex(v).real if isinstance(v, complex) and complex(v).imag == 0 else v
        if isinstance(self.v, Fraction):
            self.v = float(self.v)
        self.tol = tol

    def _lift(self, other):
        if isinstance(other, FloatScalar):
            return other.v
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return _reject_mixed(other)
        return FloatScalar(self.v + o, self.tol)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return _reject_mixed(other)
        return FloatScalar(self.v - o, self.tol)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return _reject_mixed(other)
        return FloatScalar(o - self.v, self.tol)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return _reject_mixed(other)
        return FloatScalar(self.v * o, self.tol)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return _reject_mixed(other)
        return FloatScalar(self.v / o, self.tol)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return _reject_mixed(other)
        return FloatScalar(o / self.v, self.tol)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return FloatScalar(self.v ** n, self.tol)

    def __neg__(self):
        return FloatScalar(-self.v, self.tol)

    def __pos__(self):
        return self

    def __abs__(self):
        return FloatScalar(abs(self.v), self.tol)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            if isinstance(other, (float, complex, Fraction)):
                raise MixedBackendError(
                    "cannot compare float-backend scalar with %r" % (other,))
            return NotImplemented
        d = abs(self.v - o)
        return d <= self.tol * max(1.0, abs(self.v), abs(o))

    def __repr__(self):
        return "FloatScalar(%r)" % (self.v,)


def backend_of(x):
    if isinstance(x, FloatScalar):
        return FLOAT
    if isinstance(x, (Fraction, int)):
        return EXACT
    raise TypeError("not a scalar: %r" % (x,))


def make_scalar(value, backend=EXACT, tol=DEFAULT_TOL):
    """Coerce a number into a backend coefficient."""
    if backend == EXACT:
        return Fraction(value)
    return FloatScalar(value if not isinstance(value, Fraction) else float(value), tol)


def zero(backend=EXACT, tol=DEFAULT_TOL):
    return Fraction(0) if backend == EXACT else FloatScalar(0.0, tol)


def one(backend=EXACT, tol=DEFAULT_TOL):
    return Fraction(1) if backend == EXACT else FloatScalar(1.0, tol)


def is_zero(x):
    """Tolerance-aware zero test (exact test on the exact backend)."""
    if isinstance(x, FloatScalar):
        return abs(x.v) <= x.tol
    return x == 0


def as_float(x):
    """Numeric (float/complex) value of any scalar."""
    if isinstance(x, FloatScalar):
        return x.v
    if isinstance(x, Fraction):
        return x.numerator / x.denominator
    if isinstance(x, (int, float, complex)):
        return x
    raise TypeError("not a scalar: %r" % (x,))


def scalars_close(a, b, rel=1e-8):
    """Backend-independent approximate comparison (used by cross-checks)."""
    fa, fb = as_float(a), as_float(b)
    return abs(fa - fb) <= rel * max(1.0, abs(fa), abs(fb))


def scalar_to_json(x):
    """Serialize: exact rationals as "num/den" strings, floats as floats."""
    if isinstance(x, Fraction):
        return "%d/%d" % (x.numerator, x.denominator)
    if isinstance(x, int):
        return "%d/1" % x
    if isinstance(x, FloatScalar):
        return x.v if not isinstance(x.v, complex) else [x.v.real, x.v.imag]
    raise TypeError("not a scalar: %r" % (x,))


def scalar_from_json(s, backend=EXACT, tol=DEFAULT_TOL):
    if backend == EXACT:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    if isinstance(s, list):
        return FloatScalar(complex(s[0], s[1]), tol)
    return FloatScalar(float(s), tol)
