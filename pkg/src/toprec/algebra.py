"""Univariate exact function algebra: polynomials and rational functions.

Everything is over one variable (the global uniformizer ``z``).  On the exact
backend coefficients are ``Fraction`` and rational functions are kept in
canonical form: numerator and denominator coprime, denominator monic, so
equality is representational.  On the float backend the same code runs with
``FloatScalar`` coefficients; gcd cancellation is skipped (ill-conditioned)
and equality is tolerance-based via cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

from toprec import _kernels
from toprec.scalars import (EXACT, FLOAT, FloatScalar, MixedBackendError,
                            is_zero, one, zero)


def _trim(coeffs):
    n = len(coeffs)
    while n > 0 and is_zero(coeffs[n - 1]):
        n -= 1
    return coeffs[:n]


class Poly:
    """Dense univariate polynomial, coefficients ascending by degree."""

    __slots__ = ("coeffs", "backend")

    def __init__(self, coeffs, backend=None):
        coeffs = _trim(list(coeffs))
        if backend is None:
            backend = EXACT
            for c in coeffs:
                if isinstance(c, FloatScalar):
                    backend = FLOAT
                    break
        if backend == EXACT:
            coeffs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        self.coeffs = coeffs
        self.backend = backend

    @classmethod
    def const(cls, value, backend=EXACT):
        return cls([value], backend)

    @classmethod
    def x(cls, backend=EXACT):
        return cls([zero(backend), one(backend)], backend)

    # -- structure ---------------------------------------------------------

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        if not self.coeffs:
            return zero(self.backend)
        return self.coeffs[-1]

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return zero(self.backend)

    def _check(self, other):
        if self.backend != other.backend:
            raise MixedBackendError("mixed-backend polynomial arithmetic")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, FloatScalar)):
            other = Poly([other], self.backend if isinstance(other, int) else None)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out, self.backend)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.backend)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, FloatScalar)):
            other = Poly([other], self.backend if isinstance(other, int) else None)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FloatScalar)):
            return Poly([c * other for c in self.coeffs], self.backend)
        self._check(other)
        return Poly(_kernels.convolve(self.coeffs, other.coeffs), self.backend)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly([one(self.backend)], self.backend)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other], self.backend)
        if not isinstance(other, Poly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        if self.backend != EXACT:
            raise TypeError("float-backend polynomials are unhashable")
        return hash(tuple(self.coeffs))

    def divmod(self, other):
        """Polynomial division with remainder."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly([], self.backend), self
        quot = [zero(self.backend)] * (dq + 1)
        lead = other.coeffs[-1]
        db = other.degree
        for k in range(dq, -1, -1):
            c = rem[k + db]
            if is_zero(c):
                continue
            q = c / lead
            quot[k] = q
            for i, b in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - q * b
        return Poly(quot, self.backend), Poly(rem, self.backend)

    def derivative(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.backend)

    def __call__(self, v):
        """Horner evaluation; accepts scalars, Poly or RationalFunction."""
        if isinstance(v, (Poly, RationalFunction)):
            result = None
            for c in reversed(self.coeffs):
                result = c if result is None else result * v + c
            if result is None:
                return Poly([], self.backend)
            if not isinstance(result, (Poly, RationalFunction)):
                result = v * 0 + result
            return result
        if isinstance(v, (float, complex)):
            acc = 0.0
            for c in reversed(self.coeffs):
                acc = acc * v + _num(c)
            return acc
        acc = zero(self.backend)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def shift(self, a):
        """Coefficients of p(z + a), by repeated synthetic division."""
        out = list(self.coeffs)
        n = len(out)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                out[j] = out[j] + a * out[j + 1]
        return Poly(out, self.backend)

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return Poly([c / lead for c in self.coeffs], self.backend)

    def gcd(self, other):
        """Monic gcd (exact backend only).

        Runs a primitive pseudo-remainder sequence over the integers:
        plain Euclid over Fraction coefficients explodes (every
        intermediate addition pays a gcd in the coefficient arithmetic).
        """
        if self.backend != EXACT or other.backend != EXACT:
            raise ValueError("gcd is exact-backend only")
        if self.is_zero():
            return other.monic()
        if other.is_zero():
            return self.monic()
        a = _int_primitive(self.coeffs)
        b = _int_primitive(other.coeffs)
        if len(a) < len(b):
            a, b = b, a
        while True:
            r = _pseudo_rem(a, b)
            if not r:
                break
            a, b = b, _strip_content(r)
        return Poly([Fraction(c, b[-1]) for c in b], EXACT)

    def squarefree_part(self):
        g = self.gcd(self.derivative())
        if g.degree <= 0:
            return self.monic()
        return self.divmod(g)[0].monic()

    def __repr__(self):
        return "Poly(%r)" % (self.coeffs,)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self[k]
            if is_zero(c):
                continue
            if k == 0:
                parts.append(_coef_str(c))
            elif k == 1:
                parts.append("%s*z" % _coef_str(c) if not _is_one(c) else "z")
            else:
                parts.append("%s*z^%d" % (_coef_str(c), k) if not _is_one(c)
                             else "z^%d" % k)
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


def _is_one(c):
    try:
        return c == 1
    except MixedBackendError:
        return False


def _coef_str(c):
    if isinstance(c, Fraction):
        return str(c)
    if isinstance(c, FloatScalar):
        return repr(c.v)
    return str(c)


def _num(c):
    if isinstance(c, Fraction):
        return c.numerator / c.denominator
    if isinstance(c, FloatScalar):
        return c.v
    return c


class RationalFunction:
    """Quotient of two polynomials in canonical form."""

    __slots__ = ("num", "den", "backend")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            num = Poly([num]) if not isinstance(num, (list, tuple)) else Poly(num)
        if den is None:
            den = Poly([one(num.backend)], num.backend)
        elif not isinstance(den, Poly):
            den = Poly([den]) if not isinstance(den, (list, tuple)) else Poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.backend != den.backend:
            raise MixedBackendError("mixed-backend rational function")
        self.backend = num.backend
        if self.backend == EXACT:
            if not num.is_zero():
                g = num.gcd(den)
                if g.degree > 0:
                    num = num.divmod(g)[0]
                    den = den.divmod(g)[0]
            else:
                den = Poly([one(EXACT)], EXACT)
            lead = den.leading()
            if lead != 1:
                num = Poly([c / lead for c in num.coeffs], EXACT)
                den = den.monic()
        else:
            lead = den.leading()
            num = Poly([c / lead for c in num.coeffs], FLOAT)
            den = den.monic()
        self.num = num
        self.den = den

    @classmethod
    def const(cls, value, backend=EXACT):
        return cls(Poly([value], backend) if isinstance(value, int) else Poly([value]))

    @classmethod
    def x(cls, backend=EXACT):
        return cls(Poly.x(backend))

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.degree <= 0 and self.den.degree == 0

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction, FloatScalar)):
            b = self.backend if isinstance(other, int) else None
            return RationalFunction(Poly([other], b))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den,
                                self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

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
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def __pow__(self, n):
        if n < 0:
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def derivative(self):
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den)

    def __call__(self, v):
        if isinstance(v, (Poly, RationalFunction)):
            return self.num(v) / self.den(v)
        nv = self.num(v)
        dv = self.den(v)
        if isinstance(v, (float, complex)):
            return nv / dv
        return nv / dv

    def shift(self, a):
        """f(z + a)."""
        return RationalFunction(self.num.shift(a), self.den.shift(a))

    def poles(self):
        """Finite poles with multiplicities (exact backend: rational only)."""
        roots, rem = rational_roots(self.den)
        if rem.degree > 0:
            raise ValueError(
                "denominator does not factor over the rationals: %s" % rem)
        return roots

    def degree_at_infinity(self):
        """Order of growth at infinity: deg num - deg den."""
        return self.num.degree - self.den.degree

    def __repr__(self):
        return "RationalFunction(%s, %s)" % (self.num.coeffs, self.den.coeffs)

    def __str__(self):
        if self.den.degree == 0 and self.den.leading() == 1:
            return str(self.num)
        return "(%s)/(%s)" % (self.num, self.den)


def rational_roots(p):
    """All rational roots of an exact polynomial, with multiplicities.

    Returns ``(roots, cofactor)`` where ``roots`` maps each rational root to
    its multiplicity and ``cofactor`` is the monic rational-root-free factor.
    """
    if p.backend != EXACT:
        raise ValueError("rational_roots is exact-backend only")
    if p.is_zero():
        raise ValueError("zero polynomial")
    roots = {}
    work = p.monic()
    # factor out z^k
    k = 0
    while work.degree >= 1 and work.coeffs[0] == 0:
        work = Poly(work.coeffs[1:], EXACT)
        k += 1
    if k:
        roots[Fraction(0)] = k
    while work.degree >= 1:
        r = _find_rational_root(work)
        if r is None:
            break
        m = 0
        while True:
            q, rem = work.divmod(Poly([-r, Fraction(1)], EXACT))
            if not rem.is_zero():
                break
            work = q
            m += 1
        roots[r] = roots.get(r, 0) + m
    return roots, work.monic()


def _find_rational_root(p):
    # integerize: candidates are (divisors of a0)/(divisors of an)
    den_lcm = 1
    for c in p.coeffs:
        den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in p.coeffs]
    a0 = next(c for c in ints if c != 0)
    an = ints[-1]
    for pnum in _divisors(abs(a0)):
        for pden in _divisors(abs(an)):
            for sign in (1, -1):
                r = Fraction(sign * pnum, pden)
                if p(r) == 0:
                    return r
    return None


def _divisors(n):
    if n == 0:
        return [1]
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _int_primitive(coeffs):
    """Fraction coefficient list -> primitive integer coefficient list."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // int_gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    return _strip_content(ints)


def _strip_content(ints):
    g = 0
    for c in ints:
        g = int_gcd(g, abs(c))
        if g == 1:
            break
    if g > 1:
        ints = [c // g for c in ints]
    if ints and ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _pseudo_rem(a, b):
    """Pseudo-remainder of integer coefficient lists (ascending degree)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        lead = r[-1]
        r = [c * lb for c in r[:-1]]
        for i in range(db):
            r[k + i] -= lead * b[i]
        while r and r[-1] == 0:
            r.pop()
    return r


def partial_fractions(f, poles):
    """Decompose ``f`` into polynomial part + principal parts at given poles.

    ``poles`` is an iterable of pole locations (scalars).  Returns
    ``(poly_part, table)`` with ``table[a][m] = coefficient of 1/(z-a)^m``
    (dict keyed by order ``m >= 1``).  Exact backend: raises if the
    denominator does not factor completely over the supplied pole set.
    """
    return _pole_parts(f, poles, require_complete=True)


def principal_parts(f, poles):
    """Like :func:`partial_fractions` but tolerates further poles.

    Only the principal parts at the supplied locations are extracted; the
    returned polynomial part is the quotient at infinity.
    """
    return _pole_parts(f, poles, require_complete=False)


def _pole_parts(f, poles, require_complete):
    backend = f.backend
    poly_part, rem = f.num.divmod(f.den)
    table = {}
    den = f.den
    pole_list = list(poles)
    mults = []
    work = den
    for a in pole_list:
        m = 0
        lin = Poly([-a, one(backend)], backend)
        while True:
            q, r = work.divmod(lin)
            if not (r.is_zero() or (backend == FLOAT and is_zero(r[0]))):
                break
            work = q
            m += 1
        mults.append(m)
    if require_complete and work.degree > 0:
        raise ValueError(
            "denominator has poles outside the supplied set: %s" % work)
    cofactor = work if not work.is_zero() else Poly([one(backend)], backend)
    for a, m in zip(pole_list, mults):
        if m == 0:
            continue
        # f = rem / ((z-a)^m * E(z)); Taylor-expand rem/E at a
        E = cofactor
        for b, mb in zip(pole_list, mults):
            if b is a or mb == 0:
                continue
            E = E * Poly([-b, one(backend)], backend) ** mb
        num_shift = rem.shift(a).coeffs[:m]
        den_shift = E.shift(a).coeffs[:m]
        if not den_shift:
            den_shift = [E(a)]
        num_shift += [zero(backend)] * (m - len(num_shift))
        den_shift += [zero(backend)] * (m - len(den_shift))
        inv = _kernels.power_series_inverse(den_shift, m, one(backend))
        taylor = _kernels.convolve_trunc(num_shift, inv, m)
        parts = {}
        for j in range(1, m + 1):
            c = taylor[m - j]
            if not is_zero(c):
                parts[j] = c
        if parts:
            table[a] = parts
    return poly_part, table


def from_principal_parts(poly_part, table, backend=EXACT):
    """Inverse of :func:`partial_fractions` (for round-trip checks)."""
    f = RationalFunction(poly_part if isinstance(poly_part, Poly)
                         else Poly([poly_part], backend))
    for a, parts in table.items():
        for m, c in parts.items():
            f = f + RationalFunction(Poly([c], backend),
                                     Poly([-a, one(backend)], backend) ** m)
    return f
