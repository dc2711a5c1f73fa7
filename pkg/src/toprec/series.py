"""Truncated Laurent series with sound truncation tracking.

A series is ``sum_{n=lo}^{order-1} c[n-lo] * t^n + O(t^order)``.  ``order``
may be ``None`` for exact data (polynomial input: all omitted coefficients
are genuinely zero).  Every operation propagates the provable truncation
order; asking for a coefficient beyond it raises
:class:`~toprec.scalars.TruncationError` instead of guessing.

The expansion point is metadata (a scalar, or the string ``"inf"`` for the
point at infinity, in which case the variable is w = 1/z and any dz = -dw/w**2
conversion is the caller's responsibility).
"""

from __future__ import annotations

from fractions import Fraction

from toprec import _kernels
from toprec.algebra import Poly, RationalFunction
from toprec.scalars import (EXACT, FLOAT, FloatScalar, MixedBackendError,
                            TruncationError, is_zero, one, zero)

INF = "inf"


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class LaurentSeries:
    __slots__ = ("lo", "coeffs", "order", "backend", "point")

    def __init__(self, lo, coeffs, order=None, backend=None, point=None):
        coeffs = list(coeffs)
        if backend is None:
            backend = EXACT
            for c in coeffs:
                if isinstance(c, FloatScalar):
                    backend = FLOAT
                    break
        if backend == EXACT:
            coeffs = [c if isinstance(c, Fraction) else Fraction(c)
                      for c in coeffs]
        if order is not None:
            if len(coeffs) > order - lo:
                coeffs = coeffs[:order - lo]
            elif len(coeffs) < order - lo:
                coeffs = coeffs + [zero(backend)] * (order - lo - len(coeffs))
        # strip known-zero leading coefficients (raises lo, keeps knowledge)
        k = 0
        while k < len(coeffs) and is_zero(coeffs[k]):
            k += 1
        if k:
            lo += k
            coeffs = coeffs[k:]
        if not coeffs and order is None:
            lo = 0
        if order is not None and lo > order:
            lo = order
        self.lo = lo
        self.coeffs = coeffs
        self.order = order
        self.backend = backend
        self.point = point

    # -- constructors --------------------------------------------------

    @classmethod
    def zero_series(cls, order=None, backend=EXACT, point=None):
        return cls(order if order is not None else 0, [], order,
                   backend, point)

    @classmethod
    def const(cls, c, order=None, point=None):
        return cls(0, [c], order, None, point)

    @classmethod
    def var(cls, backend=EXACT, order=None, point=None):
        return cls(1, [one(backend)], order, backend, point)

    @classmethod
    def from_poly(cls, p, point=None):
        return cls(0, list(p.coeffs), None, p.backend, point)

    # -- inspection -----------------------------------------------------

    def coefficient(self, n):
        """Coefficient of t^n; raises TruncationError if not provably known."""
        if self.order is not None and n >= self.order:
            raise TruncationError(
                "coefficient at exponent %d unknown (series truncated at "
                "order %d)" % (n, self.order))
        if n < self.lo or n >= self.lo + len(self.coeffs):
            return zero(self.backend)
        return self.coeffs[n - self.lo]

    def residue(self):
        """Coefficient of t^-1.  Requires truncation order >= 0."""
        if self.order is not None and self.order < 0:
            raise TruncationError(
                "residue unknown: series truncated at order %d" % self.order)
        return self.coefficient(-1)

    def valuation(self):
        """Exponent of the first structurally nonzero coefficient.

        Returns ``order`` (or raises for exact zero with order None) when all
        known coefficients vanish.
        """
        for i, c in enumerate(self.coeffs):
            if not is_zero(c):
                return self.lo + i
        if self.order is None:
            raise ValueError("valuation of the exact zero series")
        return self.order

    def is_known_zero(self):
        return all(is_zero(c) for c in self.coeffs)

    def known_items(self):
        """Iterate (exponent, coefficient) over stored nonzero terms."""
        for i, c in enumerate(self.coeffs):
            if not is_zero(c):
                yield self.lo + i, c

    # -- helpers ----------------------------------------------------------

    def _join_point(self, other):
        if self.point is None:
            return other.point
        if other.point is None or other.point == self.point:
            return self.point
        raise ValueError("series expanded at different points: %r vs %r"
                         % (self.point, other.point))

    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (int, Fraction, FloatScalar)):
            b = self.backend if isinstance(other, int) else None
            return LaurentSeries(0, [other], None, b)
        return None

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.backend != o.backend:
            raise MixedBackendError("mixed-backend series arithmetic")
        point = self._join_point(o)
        order = _min_order(self.order, o.order)
        lo = min(self.lo, o.lo)
        if order is not None:
            n = order - lo
        else:
            n = max(self.lo + len(self.coeffs), o.lo + len(o.coeffs)) - lo
        out = [zero(self.backend)] * n
        for i, c in enumerate(self.coeffs):
            k = self.lo + i - lo
            if 0 <= k < n:
                out[k] = out[k] + c
        for i, c in enumerate(o.coeffs):
            k = o.lo + i - lo
            if 0 <= k < n:
                out[k] = out[k] + c
        return LaurentSeries(lo, out, order, self.backend, point)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.lo, [-c for c in self.coeffs], self.order,
                             self.backend, self.point)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                raise MixedBackendError("raw floats cannot scale a series")
            return NotImplemented
        if self.backend != o.backend:
            raise MixedBackendError("mixed-backend series arithmetic")
        point = self._join_point(o)
        # truncation soundness: unknown tail of one factor multiplies the
        # lowest exponent of the other
        if self.order is None and o.order is None:
            order = None
        elif not self.coeffs or not o.coeffs:
            # one factor is zero to its order
            t1 = None if self.order is None else self.order + o.lo
            t2 = None if o.order is None else o.order + self.lo
            return LaurentSeries.zero_series(_min_order(t1, t2),
                                             self.backend, point)
        else:
            t1 = None if self.order is None else self.order + o.lo
            t2 = None if o.order is None else o.order + self.lo
            order = _min_order(t1, t2)
        lo = self.lo + o.lo
        if order is None:
            out = _kernels.convolve(self.coeffs, o.coeffs)
        else:
            out = _kernels.convolve_trunc(self.coeffs, o.coeffs, order - lo)
        return LaurentSeries(lo, out, order, self.backend, point)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by t^k."""
        return LaurentSeries(self.lo + k, self.coeffs,
                             None if self.order is None else self.order + k,
                             self.backend, self.point)

    def inverse(self, keep=None):
        """Multiplicative inverse (leading coefficient must be nonzero)."""
        v = self.valuation()
        if v >= self.lo + len(self.coeffs) or (self.order is not None
                                               and v >= self.order):
            raise ZeroDivisionError("inverse of a zero series")
        rel = len(self.coeffs) - (v - self.lo)
        if self.order is not None:
            rel = self.order - v
        if keep is not None:
            rel = min(rel, keep) if self.order is not None else keep
        if self.order is None and keep is None:
            if len(self.coeffs) - (v - self.lo) == 1:
                # monomial: exact inverse
                return LaurentSeries(-v, [one(self.backend) /
                                          self.coeffs[v - self.lo]],
                                     None, self.backend, self.point)
            raise TruncationError(
                "inverse of a non-monomial exact series needs explicit keep")
        lead = self.coeffs[v - self.lo:]
        inv = _kernels.power_series_inverse(lead[:rel] if len(lead) >= rel
                                            else lead + [zero(self.backend)]
                                            * (rel - len(lead)),
                                            rel, one(self.backend))
        return LaurentSeries(-v, inv, -v + rel, self.backend, self.point)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.coeffs or (o.order is None and o.is_known_zero()):
            raise ZeroDivisionError("division by zero series")
        keep = None
        if o.order is None and self.order is not None:
            keep = self.order - self.lo
        return self * o.inverse(keep=keep)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = LaurentSeries(0, [one(self.backend)], None, self.backend,
                            self.point)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        order = _min_order(self.order, o.order)
        lo = min(self.lo, o.lo)
        hi = max(self.lo + len(self.coeffs), o.lo + len(o.coeffs))
        if order is not None:
            hi = min(hi, order)
        for n in range(lo, hi):
            if not self.coefficient(n) == o.coefficient(n):
                return False
        return True

    # -- calculus ----------------------------------------------------------

    def derivative(self):
        out = []
        for i, c in enumerate(self.coeffs):
            n = self.lo + i
            out.append(n * c)
        return LaurentSeries(self.lo - 1, out,
                             None if self.order is None else self.order - 1,
                             self.backend, self.point)

    def antiderivative(self, constant=0):
        """Term-wise primitive; the t^-1 coefficient must be zero."""
        res = self.coefficient(-1) if (self.order is None or self.order >= 0) \
            else zero(self.backend)
        if not is_zero(res):
            raise ValueError("series has a residue; no single-valued primitive")
        out = {}
        for i, c in enumerate(self.coeffs):
            n = self.lo + i
            if n == -1:
                continue
            out[n + 1] = c * Fraction(1, n + 1) if self.backend == EXACT \
                else c * (one(FLOAT, c.tol) / (n + 1))
        lo = min(out) if out else 0
        lo = min(lo, 0)
        order = None if self.order is None else self.order + 1
        hi = max(out) + 1 if out else 1
        if order is not None:
            hi = order
        coeffs = [out.get(n, zero(self.backend)) for n in range(lo, hi)]
        s = LaurentSeries(lo, coeffs, order, self.backend, self.point)
        if constant:
            s = s + constant
        return s

    def truncate(self, order):
        return LaurentSeries(self.lo, self.coeffs,
                             _min_order(self.order, order), self.backend,
                             self.point)

    def map_exponents(self, f):
        """New series with coefficient at n multiplied by f(n) (helper)."""
        out = [c * f(self.lo + i) for i, c in enumerate(self.coeffs)]
        return LaurentSeries(self.lo, out, self.order, self.backend,
                             self.point)

    def substitute_neg(self):
        """t -> -t."""
        out = [c if (self.lo + i) % 2 == 0 else -c
               for i, c in enumerate(self.coeffs)]
        return LaurentSeries(self.lo, out, self.order, self.backend,
                             self.point)

    def even_part(self):
        out = [c if (self.lo + i) % 2 == 0 else zero(self.backend)
               for i, c in enumerate(self.coeffs)]
        return LaurentSeries(self.lo, out, self.order, self.backend,
                             self.point)

    def odd_part(self):
        out = [c if (self.lo + i) % 2 == 1 else zero(self.backend)
               for i, c in enumerate(self.coeffs)]
        return LaurentSeries(self.lo, out, self.order, self.backend,
                             self.point)

    def evaluate(self, t):
        """Numeric evaluation (float/complex argument)."""
        acc = 0.0
        for i, c in enumerate(reversed(self.coeffs)):
            acc = acc * t + _as_num(c)
        return acc * t ** self.lo

    def to_pairs(self):
        """Serialize as ordered (exponent, coefficient) pairs."""
        return [(self.lo + i, c) for i, c in enumerate(self.coeffs)]

    def __repr__(self):
        terms = ", ".join("%d: %s" % (n, c) for n, c in self.to_pairs()
                          if not is_zero(c))
        o = "inf" if self.order is None else str(self.order)
        return "LaurentSeries({%s}, O=%s)" % (terms, o)


def _as_num(c):
    if isinstance(c, Fraction):
        return c.numerator / c.denominator
    if isinstance(c, FloatScalar):
        return c.v
    return c


def expand(f, at=0, order=8, backend=None):
    """Laurent expansion of a rational function at a point (or infinity).

    At infinity the result is a series in w = 1/z (``point="inf"``).
    """
    if isinstance(f, Poly):
        f = RationalFunction(f)
    if backend is not None and backend != f.backend:
        raise MixedBackendError("expansion backend mismatch")
    b = f.backend
    if at == INF:
        # f(1/w) = w^(dd-dn) * rev(num)(w) / rev(den)(w)
        num = list(reversed(f.num.coeffs))
        den = list(reversed(f.den.coeffs))
        shift = f.den.degree - f.num.degree
        g_num = Poly(num, b)
        g_den = Poly(den, b)
        s = _expand_at_zero(g_num, g_den, order - shift, b)
        return LaurentSeries(s.lo + shift, s.coeffs,
                             None if s.order is None else s.order + shift,
                             b, INF)
    num = f.num.shift(at)
    den = f.den.shift(at)
    s = _expand_at_zero(num, den, order, b)
    s.point = at
    return s


def _expand_at_zero(num, den, order, b):
    if num.is_zero():
        return LaurentSeries.zero_series(order, b)
    vn = 0
    while is_zero(num.coeffs[vn]):
        vn += 1
    vd = 0
    while is_zero(den.coeffs[vd]):
        vd += 1
    lo = vn - vd
    keep = order - lo
    if keep <= 0:
        return LaurentSeries.zero_series(order, b)
    dc = den.coeffs[vd:]
    dc = dc[:keep] + [zero(b)] * max(0, keep - len(dc))
    inv = _kernels.power_series_inverse(dc, keep, one(b))
    out = _kernels.convolve_trunc(num.coeffs[vn:], inv, keep)
    return LaurentSeries(lo, out, order, b)


def residue(s):
    return s.residue()


def sqrt_unit(s):
    """Square root of a series with constant term 1 (exact coefficients).

    g_n = (f_n - sum_{k=1}^{n-1} g_k g_{n-k}) / 2, g_0 = 1.
    """
    if s.lo != 0 or not s.coeffs or not s.coeffs[0] == 1:
        raise ValueError("sqrt_unit needs constant term 1")
    if s.order is None:
        raise TruncationError("sqrt of exact series needs a truncation")
    n = s.order
    g = [one(s.backend)] + [zero(s.backend)] * (n - 1)
    half = Fraction(1, 2) if s.backend == EXACT else FloatScalar(0.5)
    for m in range(1, n):
        acc = s.coefficient(m)
        for k in range(1, m):
            acc = acc - g[k] * g[m - k]
        g[m] = acc * half
    return LaurentSeries(0, g, n, s.backend, s.point)


def compose(outer, inner):
    """outer(inner(t)); inner must have valuation >= 1.

    Negative exponents of ``outer`` are handled through the multiplicative
    inverse of ``inner``.
    """
    m = inner.valuation()
    if m < 1:
        raise ValueError("composition needs inner valuation >= 1")
    b = outer.backend
    point = inner.point
    bounds = []
    if outer.order is not None:
        bounds.append(m * outer.order)
    if inner.order is not None:
        exps = [n for n, c in outer.to_pairs() if not is_zero(c) and n != 0]
        if exps:
            bounds.append(min(m * (n - 1) + inner.order for n in exps))
        else:
            bounds.append(inner.order)
    order = min(bounds) if bounds else None
    result = LaurentSeries.zero_series(order, b, point)
    top = max((n for n, c in outer.to_pairs() if n >= 0), default=-1)
    if top >= 0:
        acc = None
        for n in range(top, -1, -1):
            c = outer.coefficient(n)
            if acc is None:
                acc = LaurentSeries(0, [c], order, b, point)
            else:
                acc = acc * inner + c
                if order is not None:
                    acc = acc.truncate(order)
        result = result + acc
    lo_neg = min(outer.lo, 0)
    if lo_neg < 0:
        keep = None if order is None else order + m * (1 - lo_neg)
        inv = inner.inverse(keep=keep)
        power = inv
        for n in range(-1, lo_neg - 1, -1):
            c = outer.coefficient(n)
            if not is_zero(c):
                result = result + power * c
            if n > lo_neg:
                power = power * inv
    return result if order is None else result.truncate(order)


def revert(s, order=None):
    """Compositional inverse of a series with a simple zero.

    If ``s = s1*t + s2*t^2 + ...`` with invertible ``s1``, returns ``g`` with
    ``s(g(u)) = u`` to the stated order, by Lagrange inversion:
    ``g_m = (1/m) [t^(m-1)] (t/s(t))^m``.
    """
    if s.valuation() != 1:
        raise ValueError("revert needs a simple zero (valuation 1)")
    n = order if order is not None else s.order
    if n is None:
        raise TruncationError("revert of exact series needs explicit order")
    b = s.backend
    h = s.shift(-1).inverse(keep=n)  # t/s(t) as a power series
    g = [zero(b)]
    power = LaurentSeries(0, [one(b)], n, b)
    for m in range(1, n):
        power = (power * h).truncate(n - 1)
        g.append(power.coefficient(m - 1) / m)
    return LaurentSeries(0, g, n, b, None)
