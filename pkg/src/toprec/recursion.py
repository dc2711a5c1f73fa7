"""The residue recursion for correlation differentials W_k^(h).

Stable correlators (2h-2+k > 0) are stored in a pole basis: every one is a
finite combination of products of the elementary differentials

    eta[i, m](p) = dp / (p - a_i)^m,     m >= 2,

over branch points a_i, with no order-1 terms (no residues).  A correlator is
a symmetric tensor: a map from per-slot (branch, order) assignments to exact
coefficients.  The two unstable cases are special: W_1^(0) = y dx and
W_2^(0) = B, the Bergman kernel dp dq/(p-q)^2.

The recursion step works entirely in the local frame at each branch point:
with D(zeta) = (y(zeta) - y(-zeta)) dx/dzeta and S(zeta) the bracket of
pair-products plus the genus-lowering term, the new slot's principal parts
are read off the even Laurent coefficients of S/D, because

    Res_{zeta->0} dE_q(p) S(zeta)/D(zeta)
        = - sum_m [zeta^(2m+1)] (1/(p - z(zeta))) * [S/D]_(-2m-2).

Slots other than the running one may be symbolic (tensor output) or pinned to
concrete points (much cheaper; used by the loop-equation checks), uniformly.
"""

from __future__ import annotations

from fractions import Fraction

from toprec.curve import FrameData, SpectralCurve
from toprec.scalars import (EXACT, FloatScalar, TruncationError, is_zero,
                            scalar_to_json)
from toprec.algebra import Poly, RationalFunction
from toprec.series import LaurentSeries


class SYM:
    """Sentinel marking a symbolic (tensor) slot."""

    def __repr__(self):  # pragma: no cover
        return "SYM"


SYM = SYM()


class FrameOrderError(RuntimeError):
    def __init__(self, needed, have):
        super().__init__(
            "frame order %d is insufficient; rebuild the curve geometry "
            "with order >= %d" % (have, needed))
        self.needed = needed
        self.have = have


def needed_frame_order(h, n):
    """Series length that makes all residues for W_n^(h) provable."""
    return 6 * h + 2 * n + 8


class Correlator:
    """W_k^(h) in the pole basis.

    ``terms`` maps assignment tuples ((i_1, m_1), ..., (i_k, m_k)) to
    coefficients; slot s carries eta[i_s, m_s].  Unstable cases have
    ``special`` set ("ydx" or "bergman") and empty terms.
    """

    __slots__ = ("h", "k", "terms", "special")

    def __init__(self, h, k, terms=None, special=None):
        self.h = h
        self.k = k
        self.terms = terms if terms is not None else {}
        self.special = special

    @property
    def stable(self):
        return self.special is None

    def max_order(self, slot=0):
        return max((key[slot][1] for key in self.terms), default=0)

    def permuted(self, perm):
        """Tensor with slots permuted (symmetry checks)."""
        out = {}
        for key, c in self.terms.items():
            out[tuple(key[p] for p in perm)] = c
        return Correlator(self.h, self.k, out, self.special)

    def is_symmetric(self):
        import itertools
        for perm in itertools.permutations(range(self.k)):
            if self.permuted(perm).terms != self.terms:
                return False
        return True

    def substitute(self, slot, value, curve):
        """Pin one slot to a concrete point; returns a smaller tensor."""
        bps = curve.branch_points()
        out = {}
        for key, c in self.terms.items():
            i, m = key[slot]
            base = value - bps[i].a
            w = c / base ** m
            nk = key[:slot] + key[slot + 1:]
            out[nk] = out.get(nk, 0) + w
        return Correlator(self.h, self.k - 1, out)

    def as_rational(self, curve):
        """One-slot correlator as a RationalFunction (density of W dz).

        Assembled over the common denominator prod (z - a_i)^(max order)
        so canonicalization runs once.
        """
        if self.k != 1:
            raise ValueError("as_rational needs a single free slot")
        bps = curve.branch_points()
        b = curve.backend
        if not self.terms:
            return RationalFunction(Poly([], b), Poly([1], b))
        max_ord = {}
        for ((i, m),), c in self.terms.items():
            max_ord[i] = max(max_ord.get(i, 0), m)
        pows = {}
        den = Poly([1], b)
        for i, mi in max_ord.items():
            lin = Poly([-bps[i].a, 1], b)
            plist = [Poly([1], b)]
            for _ in range(mi):
                plist.append(plist[-1] * lin)
            pows[i] = plist
            den = den * plist[mi]
        num = Poly([], b)
        for ((i, m),), c in self.terms.items():
            term = pows[i][max_ord[i] - m] * c
            for j, mj in max_ord.items():
                if j != i:
                    term = term * pows[j][mj]
            num = num + term
        return RationalFunction(num, den)

    def to_json(self):
        terms = []
        for key in sorted(self.terms, key=lambda k: tuple(
                (i, m) for i, m in k)):
            terms.append({
                "slot_assignments": [[i, m] for i, m in key],
                "coeff": scalar_to_json(self.terms[key]),
            })
        return {"h": self.h, "k": self.k, "special": self.special,
                "terms": terms}

    def __repr__(self):
        if self.special:
            return "Correlator(h=%d, k=%d, %s)" % (self.h, self.k,
                                                   self.special)
        return "Correlator(h=%d, k=%d, %d terms)" % (self.h, self.k,
                                                     len(self.terms))


class CorrelatorStore:
    """Memo table keyed by (h, slot descriptors), curve-fingerprinted."""

    def __init__(self, curve):
        self.fingerprint = curve.fingerprint()
        self.data = {}

    def key(self, h, rest):
        parts = []
        for r in rest:
            if r is SYM:
                parts.append("*")
            elif isinstance(r, FloatScalar):
                parts.append(("v", r.v))
            else:
                parts.append(("v", r))
        return (h, tuple(parts))


class Recursion:
    """Correlator engine bound to one curve and one frame order."""

    def __init__(self, curve, order=None):
        self.curve = curve
        self.fd = FrameData(curve, order)
        self.store = CorrelatorStore(curve)
        self._factor_cache = {}
        self._bval_cache = {}
        self._binj_cache = {}

    @classmethod
    def for_targets(cls, curve, h_max, k_max):
        return cls(curve, needed_frame_order(h_max, k_max + 2))

    # -- public API ---------------------------------------------------------

    def correlator(self, h, k):
        """The full symmetric tensor W_k^(h)."""
        if (h, k) == (0, 1):
            return Correlator(0, 1, special="ydx")
        if (h, k) == (0, 2):
            return Correlator(0, 2, special="bergman")
        self._check_stable(h, k)
        terms = self.corr(h, (SYM,) * (k - 1))
        return Correlator(h, k, terms)

    def correlator_at(self, h, points):
        """W_{1+len(points)}^(h) with all but the first slot pinned.

        Returns the one-slot tensor {(i, m): coeff} of the free variable.
        """
        self._check_stable(h, 1 + len(points))
        out = {}
        for key, c in self.corr(h, tuple(points)).items():
            out[key[0]] = out.get(key[0], 0) + c
        return {k: v for k, v in out.items() if not is_zero(v)}

    def correlator_rf(self, h, points):
        """Same as :meth:`correlator_at` but as a RationalFunction density."""
        t = self.correlator_at(h, points)
        c = Correlator(h, 1, {((i, m),): v for (i, m), v in t.items()})
        return c.as_rational(self.curve)

    def eval_series(self, corr, slot, bp_index, order=None):
        """Frame expansion of one slot of a stable correlator.

        Returns a dict mapping the remaining slots' assignments to Laurent
        series in zeta (density per d-zeta); for k = 1 the dict has one
        entry with the empty key.
        """
        if not corr.stable:
            raise ValueError("eval_series needs a stable correlator")
        out = {}
        for key, c in corr.terms.items():
            i, m = key[slot]
            s = self.fd.eta_on_frame(bp_index, i, m) * c
            rest = key[:slot] + key[slot + 1:]
            out[rest] = out[rest] + s if rest in out else s
        if order is not None:
            out = {k: v.truncate(order) for k, v in out.items()}
        return out

    # -- internals ----------------------------------------------------------

    def _check_stable(self, h, k):
        if h < 0 or k < 1 or 2 * h - 2 + k <= 0:
            raise ValueError("W_%d^(%d) is not produced by the recursion"
                             % (k, h))
        needed = needed_frame_order(h, k)
        if self.fd.order < needed:
            raise FrameOrderError(needed, self.fd.order)

    def corr(self, h, rest):
        """Tensor of W^(h) with slot 1 free and ``rest`` as given.

        Keys of the result: ((i, m) for slot 1,) + assignments for each
        symbolic entry of ``rest`` in order.
        """
        rest = tuple(rest)
        memo_key = self.store.key(h, rest)
        hit = self.store.data.get(memo_key)
        if hit is not None:
            return hit
        n = 1 + len(rest)
        self._check_stable(h, n)
        mmax = 3 * h + n - 3
        out = {}
        for i in range(len(self.fd.bps)):
            bracket = self._bracket(h, rest, i)
            inv_d = self.fd.inv_dydx[i]
            for key, series in bracket.items():
                t = series * inv_d
                for m in range(mmax + 1):
                    try:
                        c = t.coefficient(-2 * m - 2)
                    except TruncationError as exc:
                        raise FrameOrderError(
                            needed_frame_order(h, n) + 4, self.fd.order) \
                            from exc
                    if is_zero(c):
                        continue
                    for order_eta, ce in self.fd.out_vec[i][m].items():
                        full = ((i, order_eta),) + key
                        acc = out.get(full, 0) + (-c) * ce
                        out[full] = acc
        out = {k: v for k, v in out.items() if not is_zero(v)}
        self.store.data[memo_key] = out
        return out

    def _bracket(self, h, rest, i):
        """The recursion bracket at branch point i as dζ²-density tensors."""
        k = len(rest)
        sym_global = [p for p in range(k) if rest[p] is SYM]
        total = {}

        def add(key, series):
            total[key] = total[key] + series if key in total else series

        positions = list(range(k))
        for m in range(h + 1):
            for mask in range(1 << k):
                J = [p for p in positions if mask >> p & 1]
                if m == 0 and not J:
                    continue
                if m == h and len(J) == k:
                    continue
                comp = [p for p in positions if not mask >> p & 1]
                A = self._factor(m, tuple(J), rest, i)
                if A is None:
                    continue
                B = self._factor(h - m, tuple(comp), rest, i)
                if B is None:
                    continue
                for ka, sa in A.items():
                    sb_conj = None
                    for kb, sb in B.items():
                        key = self._merge_key(sym_global, J, ka, comp, kb,
                                              rest)
                        prod = (sa * _conj(sb)).truncate(1)
                        add(key, prod)
        # genus-lowering term
        if h >= 1:
            if h == 1 and k == 0:
                add((), self.fd.bb[i].truncate(1))
            elif 2 * (h - 1) - 2 + (k + 2) > 0:
                sub = self.corr(h - 1, (SYM,) + rest)
                for key, c in sub.items():
                    (i1, m1), (i2, m2) = key[0], key[1]
                    s = (self.fd.eta_on_frame(i, i1, m1)
                         * _conj(self.fd.eta_on_frame(i, i2, m2))) * c
                    add(key[2:], s.truncate(1))
        return total

    def _merge_key(self, sym_global, J, ka, comp, kb, rest):
        slots = {}
        ja = [p for p in J if rest[p] is SYM]
        for p, assign in zip(ja, ka):
            slots[p] = assign
        jb = [p for p in comp if rest[p] is SYM]
        for p, assign in zip(jb, kb):
            slots[p] = assign
        return tuple(slots[p] for p in sym_global)

    def _factor(self, g, positions, rest, i):
        """Evaluate W^(g)_{|positions|+1}(z(zeta), slots) at branch i.

        Returns a dict mapping assignment keys (over the symbolic entries of
        ``positions``) to scalar Laurent series in zeta, or None when the
        factor is the absent unstable W_1^(0)-free case.
        """
        n = 1 + len(positions)
        if (g, n) == (0, 1):
            raise AssertionError("excluded (0, empty) factor requested")
        if (g, n) == (0, 2):
            p = positions[0]
            if rest[p] is SYM:
                return self._b_injection(i)
            return {(): self._b_value(i, rest[p])}
        desc = tuple(rest[p] for p in positions)
        cache_key = (g, self.store.key(g, desc)[1], i)
        hit = self._factor_cache.get(cache_key)
        if hit is not None:
            return hit
        sub = self.corr(g, desc)
        out = {}
        for key, c in sub.items():
            j, m = key[0]
            s = self.fd.eta_on_frame(i, j, m) * c
            rk = key[1:]
            out[rk] = out[rk] + s if rk in out else s
        out = {kk: v.truncate(self.fd.order) for kk, v in out.items()}
        self._factor_cache[cache_key] = out
        return out

    def _b_value(self, i, v):
        """Density of B(z(zeta), v) for a concrete spectator point v."""
        key = (i, v if not isinstance(v, FloatScalar) else ("f", v.v))
        hit = self._bval_cache.get(key)
        if hit is None:
            base = (self.fd.bps[i].frame - v).inverse()
            hit = self.fd.dz[i] * base * base
            self._bval_cache[key] = hit
        return hit

    def _b_injection(self, i):
        """B(z(zeta), p) with p symbolic, as eta-basis series.

        d/dzeta of (z(zeta)-a_i)^k contributes to eta order k+1.
        """
        hit = self._binj_cache.get(i)
        if hit is None:
            hit = {}
            pows = self.fd.frame_pows[i]
            for kk in range(1, len(pows)):
                hit[((i, kk + 1),)] = pows[kk].derivative()
            self._binj_cache[i] = hit
        return hit


def _conj(series):
    """Density of a one-form at the conjugate point: W(z(-zeta)) per dzeta."""
    return -series.substitute_neg()
