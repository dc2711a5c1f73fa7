"""Spectral-curve geometry for genus-0 curves with rational parametrization.

A curve is a pair of rational functions ``x(z), y(z)`` of the global
uniformizer.  Branch points are the simple zeros of ``dx``; around each one we
build a local frame ``z(zeta)`` normalized so that

    x(z(zeta)) = x(a) + c * zeta**2    exactly,  c = x''(a)/2.

The quadratic coefficient ``c`` is kept rational instead of rescaling
``zeta`` by ``sqrt(c)``: the local involution is still ``zeta -> -zeta`` and
every residue computed in this frame is coordinate-invariant, so correlators
and free energies are unaffected while all arithmetic stays in the rationals.
The same normalization is applied to the d-th-root coordinate at poles where
``x`` has a pole of degree d >= 2 (for d = 1 the coordinate is exactly 1/x).
Frame metadata records ``c`` so externally-normalized moduli can be recovered.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from toprec.algebra import Poly, RationalFunction, rational_roots
from toprec.scalars import (EXACT, FLOAT, FloatScalar, TruncationError,
                            is_zero, one, zero)
from toprec.series import INF, LaurentSeries, compose, expand, revert

DEFAULT_FRAME_ORDER = 24


class CurveError(ValueError):
    pass


class DegenerateCurveError(CurveError):
    """Non-simple branch point or vanishing odd part of y."""


def pow_unit(s, alpha):
    """(1 + u)**alpha for a series with constant term 1, alpha rational.

    Recurrence from (1+u) g' = alpha u' g:
    n g_n = sum_{k=1..n} (alpha k - (n-k)) u_k g_{n-k}.
    """
    if s.lo != 0 or not s.coeffs or not s.coeffs[0] == 1:
        raise ValueError("pow_unit needs constant term 1")
    if s.order is None:
        raise TruncationError("pow_unit needs a truncated series")
    n = s.order
    b = s.backend
    if b == EXACT:
        alpha = Fraction(alpha)
    else:
        alpha = FloatScalar(float(alpha))
    g = [one(b)] + [zero(b)] * (n - 1)
    for m in range(1, n):
        acc = zero(b)
        for k in range(1, m + 1):
            uk = s.coefficient(k)
            if is_zero(uk):
                continue
            acc = acc + (alpha * k - (m - k)) * uk * g[m - k]
        g[m] = acc / m
    return LaurentSeries(0, g, n, b, s.point)


class BranchPoint:
    """A simple zero of dx with its local frame.

    Attributes
    ----------
    a : location (scalar)
    x_value : x(a)
    c : rational frame normalization, x(z(zeta)) = x(a) + c zeta^2
    frame : LaurentSeries z(zeta), constant term a, unit linear term
    y_series : y(z(zeta))
    """

    __slots__ = ("index", "a", "x_value", "c", "frame", "y_series", "order")

    def __init__(self, index, a, x_value, c, frame, y_series, order):
        self.index = index
        self.a = a
        self.x_value = x_value
        self.c = c
        self.frame = frame
        self.y_series = y_series
        self.order = order

    @property
    def conjugate_frame(self):
        return self.frame.substitute_neg()

    def y_odd_linear(self):
        """y'(a) in the zeta frame: linear coefficient of y(z(zeta))."""
        return self.y_series.coefficient(1)

    def __repr__(self):
        return "BranchPoint(a=%s, x=%s, c=%s)" % (self.a, self.x_value, self.c)


class PoleOfYdx:
    """A pole of the one-form y dx with its local coordinate and moduli.

    ``location`` is a scalar or "inf".  ``xi`` is the local coordinate as a
    series in the chart parameter t (t = z - location, or t = 1/z at
    infinity); ``z_loc = 1/xi`` has a simple pole at the location.  ``times``
    maps k -> t_k for k = 1..d and ``residue`` is t_0 = Res y dx.
    """

    __slots__ = ("location", "degree", "d", "xi", "t_of_xi", "times",
                 "residue", "x_pole_degree", "scale", "ydx_xi")

    def __init__(self, location, degree, d, xi, t_of_xi, times, residue,
                 x_pole_degree, scale, ydx_xi):
        self.location = location
        self.degree = degree
        self.d = d
        self.xi = xi
        self.t_of_xi = t_of_xi
        self.times = times
        self.residue = residue
        self.x_pole_degree = x_pole_degree
        self.scale = scale
        self.ydx_xi = ydx_xi

    def __repr__(self):
        return ("PoleOfYdx(at=%s, degree=%d, t=%s, t0=%s)"
                % (self.location, self.degree,
                   {k: str(v) for k, v in self.times.items()},
                   self.residue))


class SpectralCurve:
    """Genus-0 spectral curve (x(z), y(z)) with cached geometry."""

    def __init__(self, x, y, backend=None, frame_order=DEFAULT_FRAME_ORDER):
        if not isinstance(x, RationalFunction):
            x = RationalFunction(x)
        if not isinstance(y, RationalFunction):
            y = RationalFunction(y)
        if backend is None:
            backend = x.backend
        if x.backend != backend or y.backend != backend:
            raise CurveError("curve data backend mismatch")
        self.x = x
        self.y = y
        self.backend = backend
        self.frame_order = frame_order
        self.xp = x.derivative()
        if self.xp.is_zero():
            raise CurveError("dx vanishes identically")
        self.ydx = y * self.xp
        self._branch_points = None
        self._poles = None

    # -- identity --------------------------------------------------------

    def fingerprint(self):
        return "x=%s;y=%s;backend=%s;order=%d" % (
            self.x, self.y, self.backend, self.frame_order)

    def with_y(self, new_y, frame_order=None):
        return SpectralCurve(self.x, new_y, self.backend,
                             frame_order or self.frame_order)

    # -- branch points ------------------------------------------------------

    def branch_points(self):
        if self._branch_points is None:
            self._branch_points = self._compute_branch_points()
        return self._branch_points

    def _branch_locations(self):
        num = self.xp.num
        if self.backend == EXACT:
            roots, cofactor = rational_roots(num)
            if cofactor.degree > 0:
                raise CurveError(
                    "dx has non-rational zeros (%s); use the float backend"
                    % cofactor)
            locs = []
            for r in sorted(roots):
                if roots[r] > 1:
                    raise DegenerateCurveError(
                        "dx has a zero of order %d at z=%s; only simple "
                        "branch points are supported" % (roots[r], r))
                if not is_zero(self.xp.den(r)):
                    locs.append(r)
            return locs
        coeffs = [c.v for c in num.coeffs]
        roots = np.roots(list(reversed(coeffs)))
        tol = 1e-7
        locs = []
        for r in roots:
            if abs(self.xp.den(complex(r))) < tol:
                continue
            for s in locs:
                if abs(complex(r) - s.v) < tol:
                    raise DegenerateCurveError(
                        "numerically coincident zeros of dx near %s" % r)
            rr = complex(r)
            locs.append(FloatScalar(rr.real if abs(rr.imag) < tol else rr))
        locs.sort(key=lambda s: (getattr(s.v, "real", s.v),
                                 getattr(s.v, "imag", 0.0)))
        return locs

    def _compute_branch_points(self):
        order = self.frame_order
        bps = []
        for idx, a in enumerate(self._branch_locations()):
            xa = self.x(a)
            xs = expand(self.x, a, order + 3) - xa
            if xs.valuation() != 2:
                raise DegenerateCurveError(
                    "x - x(a) does not vanish to order exactly 2 at z=%s" % a)
            c = xs.coefficient(2)
            unit = xs.shift(-2) * (one(self.backend) / c)
            h = pow_unit(unit, Fraction(1, 2)).shift(1)  # h(w)^2 * c = x - xa
            w_of_zeta = revert(h, order + 1)
            frame = w_of_zeta + a
            ys = expand(self.y, a, order + 1)
            if ys.lo < 0:
                raise CurveError("y has a pole at the branch point z=%s" % a)
            y_series = compose(ys, w_of_zeta)
            if is_zero(y_series.coefficient(1)):
                raise DegenerateCurveError(
                    "y(q) - y(q~) does not have a simple zero at z=%s" % a)
            bps.append(BranchPoint(idx, a, xa, c, frame, y_series, order))
        return bps

    # -- poles of y dx ----------------------------------------------------

    def ydx_poles(self):
        if self._poles is None:
            self._poles = self._compute_ydx_poles()
        return self._poles

    def _finite_pole_locations(self):
        den = self.ydx.den
        if self.backend == EXACT:
            roots, cofactor = rational_roots(den)
            if cofactor.degree > 0:
                raise CurveError(
                    "y dx has non-rational poles (%s); use the float backend"
                    % cofactor)
            return sorted(roots.items())
        coeffs = [c.v for c in den.coeffs]
        roots = np.roots(list(reversed(coeffs)))
        out = []
        used = []
        for r in roots:
            rr = complex(r)
            for i, (s, m) in enumerate(out):
                if abs(rr - s.v) < 1e-7:
                    out[i] = (s, m + 1)
                    break
            else:
                out.append((FloatScalar(rr.real if abs(rr.imag) < 1e-7
                                        else rr), 1))
        return out

    def _compute_ydx_poles(self):
        order = self.frame_order
        poles = []
        for a, mult in self._finite_pole_locations():
            ser = expand(self.ydx, a, max(4, order))
            deg = -ser.valuation()
            if deg <= 0:
                continue
            poles.append(self._build_pole(a, deg, ser, order))
        # at infinity: density w.r.t. w = 1/z is -ydx(1/w)/w^2
        wdens = self._ydx_density_at_inf(max(4, order) + 2)
        if wdens.valuation() < 0:
            deg = -wdens.valuation()
            poles.append(self._build_pole(INF, deg, wdens, order))
        return poles

    def _ydx_density_at_inf(self, order):
        s = expand(self.ydx, INF, order)
        return -s.shift(-2)  # dz = -dw/w^2

    def _x_local_data(self, location, order):
        """(x pole degree at location, x-series in the chart parameter)."""
        if location == INF:
            xs = expand(self.x, INF, order)
        else:
            xs = expand(self.x, location, order)
        v = xs.valuation()
        return (-v if v < 0 else 0), xs

    def _build_pole(self, location, degree, ydens, order):
        ord_needed = max(order, degree + 4)
        dpole, xs = self._x_local_data(location, ord_needed)
        b = self.backend
        if dpole == 0:
            # x regular: xi = x - x(location); exactly the printed recipe
            xa = xs.coefficient(0)
            xi = xs - xa
            scale = one(b)
            if xi.valuation() != 1:
                raise CurveError(
                    "x - x(%s) has a zero of order > 1 at a pole of ydx "
                    "(branch point collides with the pole)" % (location,))
            d_root = 1
        else:
            lead = xs.coefficient(-dpole)
            unit = xs.shift(dpole) * (one(b) / lead)
            if dpole == 1:
                # xi = 1/x exactly
                xi = expand_inverse(xs)
                scale = one(b)
            else:
                xi = pow_unit(unit, Fraction(-1, dpole)).shift(1)
                scale = lead
            d_root = dpole
        t_of_xi = revert(xi, min(xi.order, ord_needed))
        # ydx in xi: g(xi) = ydens(t(xi)) * t'(xi)
        g = compose(ydens, t_of_xi) * t_of_xi.derivative()
        t0 = ydens.residue()
        d = degree - 1
        times = {}
        for k in range(1, d + 1):
            c = g.coefficient(-k - 1)
            times[k] = -c / k
        return PoleOfYdx(location, degree, d, xi, t_of_xi, times, t0,
                         dpole, scale, g)

    # -- local data reconstruction (invariant check) -----------------------

    def pole_principal_reconstruction(self, pole):
        """Principal part series rebuilt from the moduli; for invariants."""
        b = self.backend
        n = pole.ydx_xi.order
        coeffs = {}
        for k, tk in pole.times.items():
            coeffs[-k - 1] = -k * tk
        coeffs[-1] = pole.residue
        lo = min(coeffs) if coeffs else 0
        ser = LaurentSeries(lo, [coeffs.get(m, zero(b))
                                 for m in range(lo, 0)], 0, b)
        return ser


def expand_inverse(s):
    """1/s for a Laurent series (thin wrapper, keeps call sites readable)."""
    return s.inverse()


# -- global objects ---------------------------------------------------------


def bergman_coefficient():
    """Double-pole coefficient of B(p,q) = dp dq/(p-q)^2 at p = q."""
    return Fraction(1)


def global_involution(curve):
    """The deck transformation of x for curves with deg(x) = 2.

    Returns sigma(z) as a RationalFunction with x(sigma(z)) = x(z) and
    sigma != id.  Raises CurveError when deg(x) != 2.
    """
    x = curve.x
    n, dpol = x.num, x.den
    if max(n.degree, dpol.degree) != 2:
        raise CurveError("global involution needs deg(x) = 2, got %d"
                         % max(n.degree, dpol.degree))
    b = curve.backend
    zvar = RationalFunction(Poly.x(b))
    # roots w of N(w) - x(z) D(w) = 0: quadratic in w; one root is w = z.
    # sum of roots = -c1/c2, product = c0/c2 with ci rational in z.
    X = x
    c2 = RationalFunction(Poly([n[2]], b)) - X * dpol[2]
    c1 = RationalFunction(Poly([n[1]], b)) - X * dpol[1]
    if c2.is_zero():
        raise CurveError("x fiber degenerates (leading fiber coefficient 0)")
    sigma = -c1 / c2 - zvar
    return sigma


def diagonal_bergman_subtraction(curve):
    """lim_{w->z} [1/(z-w)^2 - x'(z)x'(w)/(x(z)-x(w))^2].

    The finite part of the Bergman kernel minus its x-plane image on the
    diagonal; equals (x''/x')^2/4 - x'''/(6 x').
    """
    xp = curve.xp
    xpp = xp.derivative()
    xppp = xpp.derivative()
    q = xpp / xp
    return q * q * Fraction(1, 4) - xppp / (xp * 6)


# -- recursion-facing frame tables ------------------------------------------


class FrameData:
    """Per-branch-point series tables consumed by the residue recursion.

    All series are in the frame variable zeta at branch point ``i``:

    - ``ydx_dens[i]``: y(z(zeta)) * 2 c zeta  (density of y dx)
    - ``inv_dydx[i]``: 1 / [(y(zeta)-y(-zeta)) * 2 c zeta]
    - ``bb[i]``: density of B(q, q~) = -z'(zeta) z'(-zeta)/(z(zeta)-z(-zeta))^2
    - ``eta_eval[i][(j, m)]``: density of dz/(z - a_j)^m along the frame
    - ``out_vec[i][m]``: eta-expansion of [zeta^(2m+1)] 1/(p - z(zeta))
      (dict order -> coefficient at branch i), the building block of dE
    - ``frame_pows[i][k]``: (z(zeta) - a_i)^k
    """

    def __init__(self, curve, order=None):
        self.curve = curve
        self.order = order or curve.frame_order
        bps = curve.branch_points()
        if any(bp.order < self.order for bp in bps):
            curve2 = SpectralCurve(curve.x, curve.y, curve.backend,
                                   self.order)
            bps = curve2.branch_points()
        self.bps = bps
        b = curve.backend
        n = self.order
        self.ydx_dens = []
        self.inv_dydx = []
        self.bb = []
        self.dz = []
        self.frame_pows = []
        self.out_vec = []
        self._eta_cache = {}
        for bp in bps:
            zc = bp.frame
            dz = zc.derivative()
            self.dz.append(dz)
            two_c_zeta = LaurentSeries(1, [2 * bp.c], None, b)
            ys = bp.y_series
            self.ydx_dens.append((ys * two_c_zeta).truncate(n - 1))
            dy = ys - ys.substitute_neg()
            self.inv_dydx.append((dy * two_c_zeta).inverse())
            # d(z(-zeta))/dzeta = -z'(-zeta): the chain-rule sign is carried
            # by the substituted derivative itself
            dzm = zc.substitute_neg().derivative()
            delta = zc - zc.substitute_neg()
            self.bb.append((dz * dzm) * (delta * delta).inverse())
            w = zc - bp.a
            pows = [None, w]
            for k in range(2, n):
                pows.append((pows[-1] * w).truncate(n))
            self.frame_pows.append(pows)
            vecs = []
            m = 0
            while 2 * m + 1 <= n - 1:
                vec = {}
                for k in range(1, min(2 * m + 2, len(pows))):
                    ck = pows[k].coefficient(2 * m + 1)
                    if not is_zero(ck):
                        vec[k + 1] = ck
                vecs.append(vec)
                m += 1
            self.out_vec.append(vecs)

    def base_inverse(self, i, j):
        """1/(z_i(zeta) - a_j) as a series at branch i."""
        key = ("base", i, j)
        if key not in self._eta_cache:
            self._eta_cache[key] = (self.bps[i].frame
                                    - self.bps[j].a).inverse()
        return self._eta_cache[key]

    def eta_on_frame(self, i, j, m):
        """Series of z'(zeta)/(z(zeta) - a_j)^m at branch point i."""
        key = (i, j, m)
        if key not in self._eta_cache:
            self._eta_cache[key] = self.dz[i] * self.base_inverse(i, j) ** m
        return self._eta_cache[key]


class Kernel:
    """The recursion kernel dE_q(p) / ((y(q) - y(q~)) dx(q)) at one branch.

    Both dE and K are stored as eta-vector-valued series in zeta: a dict
    mapping (branch, order) to the scalar series multiplying
    dp/(p - a_branch)^order.
    """

    def __init__(self, frame_data, index):
        self.fd = frame_data
        self.index = index
        pows = frame_data.frame_pows[index]
        self.dE = {}
        for k in range(1, len(pows)):
            odd = -pows[k].odd_part()
            if not odd.is_known_zero():
                self.dE[(index, k + 1)] = odd
        inv = frame_data.inv_dydx[index]
        self.series = {key: s * inv for key, s in self.dE.items()}
        dz2c = LaurentSeries(1, [2 * frame_data.bps[index].c], None,
                             frame_data.curve.backend)
        ys = frame_data.bps[index].y_series
        self.dydx = ((ys - ys.substitute_neg()) * dz2c)

    def contract_check(self):
        """K * (y(q)-y(q~)) dx(q) = dE, coefficient-wise."""
        for key, s in self.series.items():
            if not (s * self.dydx) == self.dE[key]:
                return False
        return True

    def dE_is_odd(self):
        return all(s.even_part().is_known_zero() for s in self.dE.values())


def dE_series(curve_or_fd, index, order=None):
    """dE coefficients at a branch point, as eta-vector-valued series."""
    fd = curve_or_fd if isinstance(curve_or_fd, FrameData) \
        else FrameData(curve_or_fd, order)
    return Kernel(fd, index).dE


def recursion_kernel(curve_or_fd, index, order=None):
    fd = curve_or_fd if isinstance(curve_or_fd, FrameData) \
        else FrameData(curve_or_fd, order)
    return Kernel(fd, index)


def b_kernel_moment(curve, pole, k):
    """B_{k,i}(p) = -Res_{q->pole} B(p, q) z_loc(q)^k, as a density.

    Returns the z-density (RationalFunction) of the deformation differential
    used by the variation tests.  ``pole`` is a PoleOfYdx.
    """
    if k < 0:
        raise ValueError("moment index must be >= 0")
    b = curve.backend
    zero_rf = RationalFunction(Poly([], b), Poly([1], b))
    if k == 0:
        return zero_rf
    zloc = pole.xi.inverse()  # z_loc = 1/xi as a series in the chart param
    zk = zloc ** k
    out = zero_rf
    if pole.location == INF:
        # B(p, 1/w) density per dw: -sum_j (j+1) p^j w^j
        for j in range(0, k):
            c = zk.coefficient(-1 - j)
            if is_zero(c):
                continue
            out = out + RationalFunction(
                Poly([zero(b)] * j + [(j + 1) * c], b))
        return out
    a = pole.location
    for j in range(0, k):
        c = zk.coefficient(-1 - j)
        if is_zero(c):
            continue
        out = out - RationalFunction(
            Poly([(j + 1) * c], b), Poly([-a, one(b)], b) ** (j + 2))
    return out
