"""Discrete Virasoro operators, the small-N matrix-integral oracle, and the
annihilation check.

Operators act on formal series in couplings t_0, t_1, ..., t_d.  The
operator family implemented here is

    L_j = 2 j d/dt_j
        + (1/N^2) sum_{l=1}^{j-1} l (j-l) d2/dt_l dt_{j-l}
        + sum_{k>=1, k+j<=d} (k+j) t_k d/dt_{k+j}
        + [j = 0] d/dt_0

It satisfies [L_j, L_l] = (j-l) L_{j+l} exactly (away from the index
truncation boundary) and annihilates the eigenvalue-integral oracle

    Z(t) = e^{N^2 t_0} < exp( N sum_{k>=1} (t_k/k) p_k(lambda) ) >_G

(p_k = power sums, G the Gaussian base fixed by the designated t_2 < 0,
Vandermonde^2 measure for N = 2, normalized by the pure-Gaussian value) for
every j >= 0 and both N = 1 and N = 2.  Two deliberate conventions, both
forced by requiring annihilation to hold exactly: the 2j d/dt_j term carries
no 1/N^2, and L_0 carries the d/dt_0 term that absorbs the dilatation
anomaly N^2 (the couplings enter as t_k/k, the "times" normalization).
"""

from __future__ import annotations

import itertools
from fractions import Fraction


# -- differential operators ---------------------------------------------------


class DifferentialOperator:
    """Finite polynomial-coefficient operator in the couplings.

    Canonical form: a dict mapping (tmono, dmono, npow) -> coefficient with
    tmono a sorted tuple of (index, exponent), dmono a sorted tuple of
    derivative indices (with repetition), npow the power of 1/N^2.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if c:
                    self.terms[key] = self.terms.get(key, 0) + c
            self.terms = {k: v for k, v in self.terms.items() if v}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def t_term(cls, index, coeff=1):
        return cls({(((index, 1),), (), 0): Fraction(coeff)})

    @classmethod
    def d_term(cls, index, coeff=1, npow=0):
        return cls({((), (index,), npow): Fraction(coeff)})

    @classmethod
    def dd_term(cls, i, j, coeff=1, npow=0):
        return cls({((), tuple(sorted((i, j))), npow): Fraction(coeff)})

    @classmethod
    def t_d_term(cls, tindex, dindex, coeff=1, npow=0):
        return cls({(((tindex, 1),), (dindex,), npow): Fraction(coeff)})

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return DifferentialOperator(out)

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, scalar):
        return DifferentialOperator({k: v * scalar
                                     for k, v in self.terms.items()})

    __rmul__ = __mul__

    def compose(self, other):
        """Operator product self . other in canonical form."""
        out = {}
        for (ta, da, na), ca in self.terms.items():
            for (tb, db, nb), cb in other.terms.items():
                for coeff, tmono, dmono in _normal_order(da, tb):
                    key = (_merge_tmono(ta, tmono),
                           tuple(sorted(dmono + db)), na + nb)
                    c = ca * cb * coeff
                    out[key] = out.get(key, 0) + c
        return DifferentialOperator(out)

    def commutator(self, other):
        return self.compose(other) - other.compose(self)

    def restrict(self, max_index):
        """Drop terms touching any coupling index above ``max_index``."""
        out = {}
        for (t, d, n), c in self.terms.items():
            if all(i <= max_index for i, _ in t) and \
                    all(i <= max_index for i in d):
                out[(t, d, n)] = c
        return DifferentialOperator(out)

    def is_zero(self):
        return not self.terms

    def apply(self, series, n_value):
        """Apply to a CouplingSeries with a concrete integer N."""
        invn2 = Fraction(1, n_value * n_value)
        out = CouplingSeries({}, series.variables, series.valid_degree,
                             series.max_index)
        for (t, d, n), c in self.terms.items():
            part = series
            for idx in d:
                part = part.differentiate(idx)
            for idx, e in t:
                for _ in range(e):
                    part = part.multiply_by_t(idx)
            out = out + part * (c * invn2 ** n)
        return out

    def __repr__(self):
        bits = []
        for (t, d, n), c in sorted(self.terms.items()):
            s = str(c)
            if n:
                s += "/N^%d" % (2 * n)
            for i, e in t:
                s += " t%d" % i + ("^%d" % e if e > 1 else "")
            for i in d:
                s += " D%d" % i
            bits.append(s)
        return "DifferentialOperator[%s]" % "; ".join(bits)


def _merge_tmono(a, b):
    acc = {}
    for i, e in a:
        acc[i] = acc.get(i, 0) + e
    for i, e in b:
        acc[i] = acc.get(i, 0) + e
    return tuple(sorted((i, e) for i, e in acc.items() if e))


def _normal_order(dmono, tmono):
    """Move derivatives right past a t-monomial (Leibniz).

    Yields (coefficient, remaining_tmono, surviving_derivatives).
    """
    if not dmono or not tmono:
        yield 1, tmono, dmono
        return
    texp = {i: e for i, e in tmono}
    groups = {}
    for i in dmono:
        groups[i] = groups.get(i, 0) + 1
    choices = []
    for i, m in sorted(groups.items()):
        emax = min(m, texp.get(i, 0))
        choices.append([(i, s) for s in range(emax + 1)])
    for pick in itertools.product(*choices):
        coeff = 1
        new_texp = dict(texp)
        surviving = []
        for i, s in pick:
            m = groups[i]
            e = texp.get(i, 0)
            # choose s of the m derivatives to hit t_i^e
            coeff *= _binom(m, s) * _falling(e, s)
            new_texp[i] = e - s
            surviving.extend([i] * (m - s))
        yield (coeff,
               tuple(sorted((i, e) for i, e in new_texp.items() if e)),
               tuple(sorted(surviving)))


def _binom(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def _falling(e, s):
    out = 1
    for i in range(s):
        out *= e - i
    return out


def discrete_L(j, d_max, with_t0=True):
    """The discrete Virasoro operator L_j truncated to couplings <= d_max."""
    if j < 0:
        raise ValueError("j must be >= 0")
    op = DifferentialOperator.zero()
    if j > 0 and j <= d_max:
        op = op + DifferentialOperator.d_term(j, 2 * j)
    for l in range(1, j):
        if l <= d_max and j - l <= d_max:
            op = op + DifferentialOperator.dd_term(l, j - l, l * (j - l),
                                                   npow=1)
    for k in range(1, d_max - j + 1):
        op = op + DifferentialOperator.t_d_term(k, k + j, k + j)
    if j == 0 and with_t0:
        op = op + DifferentialOperator.d_term(0, 1)
    return op


def commutator_check(j, l, d_max):
    """[L_j, L_l] - (j-l) L_{j+l}, with boundary terms excluded.

    Terms touching couplings above d_max - j - l are dropped on both sides
    (the truncation boundary); the rest must cancel exactly.  Returns the
    residual operator (zero when the relation holds).
    """
    lj = discrete_L(j, d_max)
    ll = discrete_L(l, d_max)
    rhs = discrete_L(j + l, d_max) * (j - l)
    diff = lj.commutator(ll) - rhs
    return diff.restrict(d_max - j - l)


# -- coupling series ----------------------------------------------------------


class CouplingSeries:
    """Truncated formal series in couplings: multi-index -> coefficient.

    Keys are sorted tuples of (index, exponent).  ``valid_degree`` is the
    total degree through which coefficients are provably known; operations
    that consume knowledge (differentiation) lower it.
    """

    def __init__(self, data, variables, valid_degree, max_index):
        self.data = {k: v for k, v in data.items() if v}
        self.variables = frozenset(variables)
        self.valid_degree = valid_degree
        self.max_index = max_index

    def copy_meta(self, data, valid_degree=None):
        return CouplingSeries(data, self.variables,
                              self.valid_degree if valid_degree is None
                              else valid_degree, self.max_index)

    def __add__(self, other):
        out = dict(self.data)
        for k, v in other.data.items():
            out[k] = out.get(k, 0) + v
        return CouplingSeries(out, self.variables | other.variables,
                              min(self.valid_degree, other.valid_degree),
                              max(self.max_index, other.max_index))

    def __mul__(self, scalar):
        return self.copy_meta({k: v * scalar for k, v in self.data.items()})

    def differentiate(self, idx):
        if idx not in self.variables:
            raise ValueError("series does not track coupling t_%d" % idx)
        out = {}
        for key, c in self.data.items():
            mono = dict(key)
            e = mono.get(idx, 0)
            if not e:
                continue
            mono[idx] = e - 1
            nk = tuple(sorted((i, x) for i, x in mono.items() if x))
            out[nk] = out.get(nk, 0) + e * c
        return self.copy_meta(out, self.valid_degree - 1)

    def multiply_by_t(self, idx):
        out = {}
        for key, c in self.data.items():
            mono = dict(key)
            mono[idx] = mono.get(idx, 0) + 1
            nk = tuple(sorted(mono.items()))
            out[nk] = out.get(nk, 0) + c
        return self.copy_meta(out)

    def coefficients_within(self, degree, max_index=None):
        """(key, coeff) for monomials inside the provable window."""
        for key, c in self.data.items():
            deg = sum(e for _, e in key)
            if deg > degree:
                continue
            if max_index is not None and any(i > max_index for i, _ in key):
                continue
            yield key, c

    def max_abs_within(self, degree, max_index=None):
        worst = Fraction(0)
        where = None
        for key, c in self.coefficients_within(degree, max_index):
            if abs(c) > worst:
                worst = abs(c)
                where = key
        return worst, where

    def to_json(self):
        from toprec.scalars import scalar_to_json
        return {
            "valid_degree": self.valid_degree,
            "max_index": self.max_index,
            "terms": [
                {"monomial": [[i, e] for i, e in key],
                 "coeff": scalar_to_json(Fraction(c))}
                for key, c in sorted(self.data.items())
            ],
        }


# -- the eigenvalue-integral oracle -------------------------------------------


def _gauss_moments(sigma2, top):
    """< lambda^a > for the centered Gaussian, a = 0..top (odd ones zero)."""
    out = [Fraction(1), Fraction(0)]
    for a in range(2, top + 1):
        out.append(out[a - 2] * (a - 1) * sigma2 if a % 2 == 0
                   else Fraction(0))
    return out


def _power_sum_average(n_value, powers, sigma2):
    """< prod_k p_k(lambda)^{n_k} >, Vandermonde^2-weighted, normalized.

    ``powers``: dict k -> exponent (k >= 1).  n_value in {1, 2}.
    """
    if n_value == 1:
        total = sum(k * e for k, e in powers.items())
        m = _gauss_moments(sigma2, total)
        return m[total]
    if n_value != 2:
        raise ValueError("oracle supports N in {1, 2}")
    # expand prod (l1^k + l2^k)^e * (l1 - l2)^2 into l1^a l2^b
    poly = {(0, 0): Fraction(1)}
    for k, e in powers.items():
        for _ in range(e):
            nxt = {}
            for (a, b), c in poly.items():
                nxt[(a + k, b)] = nxt.get((a + k, b), 0) + c
                nxt[(a, b + k)] = nxt.get((a, b + k), 0) + c
            poly = nxt
    with_vdm = {}
    for (a, b), c in poly.items():
        for (da, db, w) in ((2, 0, 1), (1, 1, -2), (0, 2, 1)):
            key = (a + da, b + db)
            with_vdm[key] = with_vdm.get(key, 0) + c * w
    top = max((a for a, _ in with_vdm), default=0)
    top = max(top, max((b for _, b in with_vdm), default=0))
    m = _gauss_moments(sigma2, top)
    total = Fraction(0)
    for (a, b), c in with_vdm.items():
        total += c * m[a] * m[b]
    norm = 2 * sigma2  # < (l1-l2)^2 > for the factorized Gaussian
    return total / norm


def onemm_partition_oracle(n_value, degree, d_max=None, t2_base=Fraction(-1, 2)):
    """Formal expansion of the normalized eigenvalue integral.

    Z(t) = e^{N^2 t_0} < exp(N sum_{k=1}^{d} (tau_k / k) p_k) >_G / (base)

    expanded in all shifted couplings (tau_2 = t_2 - t2_base) through total
    degree ``degree``; the Gaussian base has variance -1/(N t2_base).
    """
    if t2_base >= 0:
        raise ValueError("the Gaussian base coupling t_2 must be negative")
    n = n_value
    d = d_max if d_max is not None else 8
    sigma2 = Fraction(-1, n) / t2_base
    variables = list(range(0, d + 1))
    data = {}
    pert = [k for k in variables if k >= 1]
    for combo in _monomials(pert, degree):
        powers = {k: e for k, e in combo if e}
        coeff = Fraction(1)
        for k, e in combo:
            if e:
                coeff *= Fraction(n, k) ** e / _factorial(e)
        avg = _power_sum_average(n, powers, sigma2) if powers else Fraction(1)
        base_key = tuple(sorted((k, e) for k, e in combo if e))
        c = coeff * avg
        if not c:
            continue
        # tensor with the exp(N^2 t_0) factor
        used = sum(e for _, e in base_key)
        for e0 in range(0, degree - used + 1):
            c0 = c * Fraction(n * n) ** e0 / _factorial(e0)
            key = tuple(sorted(base_key + (((0, e0),) if e0 else ())))
            data[key] = data.get(key, 0) + c0
    return CouplingSeries(data, variables, degree, d)


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _monomials(indices, degree):
    """All exponent assignments over ``indices`` with total degree <= degree."""
    if not indices:
        yield ()
        return
    head, rest = indices[0], indices[1:]
    for e in range(degree + 1):
        for tail in _monomials(rest, degree - e):
            yield ((head, e),) + tail


def annihilation_check(j_max, n_value, degree, d_max=8,
                       t2_base=Fraction(-1, 2), corrupt=None):
    """max |coefficient| of L_j Z over j <= j_max within the provable window.

    The window excludes monomials of total degree > degree - 2 (derivative
    knowledge) and monomials touching indices above d_max - j (classical-sum
    truncation).  ``corrupt``: optional (monomial, delta) fault injection
    for testing the test.
    """
    z = onemm_partition_oracle(n_value, degree, d_max, t2_base)
    if corrupt is not None:
        key, delta = corrupt
        z.data[key] = z.data.get(key, 0) + delta
    worst = Fraction(0)
    report = {}
    for j in range(0, j_max + 1):
        op = _L_in_shifted_couplings(j, d_max, t2_base)
        lz = op.apply(z, n_value)
        w, where = lz.max_abs_within(degree - 2, d_max - j)
        report[j] = (w, where)
        worst = max(worst, w)
    return worst, report


def _L_in_shifted_couplings(j, d_max, t2_base):
    """L_j rewritten in the shifted variable tau_2 = t_2 - t2_base.

    Only the classical term changes: t_2 d/dt_{2+j} becomes
    (tau_2 + t2_base) d/dtau_{2+j}.
    """
    op = discrete_L(j, d_max)
    if 2 + j <= d_max:
        op = op + DifferentialOperator.d_term(2 + j, (2 + j) * t2_base)
    return op
