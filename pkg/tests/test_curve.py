from fractions import Fraction

import pytest

from toprec.algebra import Poly, RationalFunction
from toprec.curve import (CurveError, DegenerateCurveError, FrameData,
                          SpectralCurve, b_kernel_moment,
                          diagonal_bergman_subtraction, global_involution,
                          recursion_kernel)
from toprec.numeric import as_c, contour_residue, rf_eval
from toprec.scalars import FLOAT, FloatScalar
from toprec.series import INF, compose, expand

F = Fraction


def zf():
    return RationalFunction(Poly([0, 1]))


def airy():
    return SpectralCurve(zf() ** 2, zf())


def catalan_curve():
    return SpectralCurve(zf() + 1 / zf(), zf())


def test_branch_points_airy():
    bps = airy().branch_points()
    assert len(bps) == 1
    bp = bps[0]
    assert bp.a == 0 and bp.c == 1
    assert bp.frame.coefficient(1) == 1
    assert all(bp.frame.coefficient(n) == 0 for n in range(2, 8))


def test_branch_points_catalan():
    bps = catalan_curve().branch_points()
    assert [bp.a for bp in bps] == [F(-1), F(1)]
    assert [bp.x_value for bp in bps] == [F(-2), F(2)]


def test_branch_point_frame_identity():
    # x(z(zeta)) - x(a) - c zeta^2 vanishes to the frame order
    for curve in (airy(), catalan_curve()):
        for bp in curve.branch_points():
            xs = expand(curve.x, bp.a, bp.frame.order + 1)
            chk = compose(xs, bp.frame - bp.a) - bp.x_value
            assert chk.coefficient(2) == bp.c
            for n in range(chk.lo, chk.order):
                if n != 2:
                    assert chk.coefficient(n) == 0


def test_involution_is_zeta_negation():
    bp = catalan_curve().branch_points()[1]
    conj = bp.conjugate_frame
    assert conj.coefficient(0) == bp.a
    assert conj.coefficient(1) == -bp.frame.coefficient(1)
    # double negation returns the frame
    assert conj.substitute_neg() == bp.frame


def test_cubic_x_rejected():
    with pytest.raises(DegenerateCurveError):
        SpectralCurve(zf() ** 3, zf()).branch_points()


def test_irrational_branch_points_need_float():
    # x' = 3z^2 - 2 has no rational zeros
    x = zf() ** 3 - 2 * zf()
    with pytest.raises(CurveError):
        SpectralCurve(x, zf()).branch_points()
    fx = RationalFunction(Poly([FloatScalar(0.0), FloatScalar(-2.0),
                                FloatScalar(0.0), FloatScalar(1.0)]))
    fy = RationalFunction(Poly([FloatScalar(0.0), FloatScalar(1.0)]))
    bps = SpectralCurve(fx, fy, backend=FLOAT, frame_order=8).branch_points()
    assert len(bps) == 2


def test_airy_dE_series():
    # dE_q(p) = -zeta/(p^2 - zeta^2) dp = -(zeta/p^2 + zeta^3/p^4 + ...) dp
    fd = FrameData(airy(), 12)
    ker = recursion_kernel(fd, 0)
    assert ker.dE[(0, 2)].coefficient(1) == -1
    assert ker.dE[(0, 4)].coefficient(3) == -1
    assert ker.dE_is_odd()
    assert (0, 3) not in ker.dE


def test_airy_kernel_series_and_contract():
    # K(p,zeta) = -dp/(4 zeta (p^2-zeta^2)): eta-order 2m+2 carries -1/(4zeta)
    fd = FrameData(airy(), 12)
    ker = recursion_kernel(fd, 0)
    assert ker.series[(0, 2)].coefficient(-1) == F(-1, 4)
    assert ker.series[(0, 4)].coefficient(1) == F(-1, 4)
    assert ker.contract_check()


def test_kernel_contract_general():
    fd = FrameData(catalan_curve(), 14)
    for i in (0, 1):
        assert recursion_kernel(fd, i).contract_check()


def test_kernel_float_cross_check():
    # leading kernel coefficient at a=1 of the Catalan curve vs a direct
    # numeric evaluation of dE/((y-y~)dx) at zeta = 1e-3
    curve = catalan_curve()
    fd = FrameData(curve, 14)
    ker = recursion_kernel(fd, 1)  # branch point a=1
    bp = fd.bps[1]
    p0 = 5.0
    zeta = 1e-3
    zq = bp.frame.evaluate(zeta)
    zqbar = bp.frame.evaluate(-zeta)
    dzq = bp.frame.derivative().evaluate(zeta)
    yq = rf_eval(curve.y, zq)
    yqbar = rf_eval(curve.y, zqbar)
    xp = curve.x.derivative()
    dE = 0.5 * (1 / (p0 - zqbar) - 1 / (p0 - zq))
    K_num = dE / ((yq - yqbar) * rf_eval(xp, zq) * dzq)
    K_ser = sum(s.evaluate(zeta) / (p0 - as_c(fd.bps[j].a)) ** m
                for (j, m), s in ker.series.items())
    assert abs(K_num - K_ser) <= 1e-6 * abs(K_num)


def test_ydx_poles_airy():
    poles = airy().ydx_poles()
    assert len(poles) == 1
    p = poles[0]
    assert p.location == INF
    assert p.degree == 4
    assert p.times == {1: 0, 2: 0, 3: F(2, 3)}
    assert p.residue == 0
    # reconstruction: principal part of ydx equals sum k t_k z^{k-1} dz + res
    rec = airy().pole_principal_reconstruction(p)
    for n in range(rec.lo, 0):
        assert rec.coefficient(n) == p.ydx_xi.coefficient(n)


def test_ydx_poles_catalan():
    poles = catalan_curve().ydx_poles()
    by_loc = {p.location: p for p in poles}
    assert set(by_loc) == {F(0), INF}
    p0 = by_loc[F(0)]
    assert p0.degree == 1
    assert p0.residue == -1
    pinf = by_loc[INF]
    assert pinf.degree == 3
    assert pinf.residue == 1
    for p in poles:
        rec = catalan_curve().pole_principal_reconstruction(p)
        for n in range(rec.lo, 0):
            assert rec.coefficient(n) == p.ydx_xi.coefficient(n)


def test_residue_free_t0_is_zero():
    # y dx for x=z^2, y=z+z^3 has no finite poles and no residue at infinity
    curve = SpectralCurve(zf() ** 2, zf() + zf() ** 3)
    for p in curve.ydx_poles():
        assert p.residue == 0


def test_b_kernel_moment_airy():
    curve = airy()
    pole = curve.ydx_poles()[0]
    assert b_kernel_moment(curve, pole, 0).is_zero()
    assert b_kernel_moment(curve, pole, 1) == RationalFunction(Poly([1]))
    assert b_kernel_moment(curve, pole, 2) == RationalFunction(Poly([0, 2]))


def test_b_kernel_moment_finite_pole():
    # for the Catalan curve's pole at z=0 with z_loc = 1/xi, xi = 1/x:
    # numeric double-check of -Res B(p, q) z_loc(q)^2 at p0 = 3
    curve = catalan_curve()
    pole = [p for p in curve.ydx_poles() if p.location == F(0)][0]
    bk = b_kernel_moment(curve, pole, 2)
    p0 = 3.0
    # z_loc = 1/xi and xi = 1/x at a simple pole of x, so z_loc = x(q)
    val = -contour_residue(
        lambda q: (1 / (p0 - q) ** 2) * rf_eval(curve.x, q) ** 2,
        center=0.0, radius=0.05)
    assert abs(rf_eval(bk, p0) - val) <= 1e-8 * max(1.0, abs(val))


def test_global_involution():
    cat = catalan_curve()
    sig = global_involution(cat)
    assert cat.x(sig) == cat.x
    a = airy()
    assert global_involution(a) == -RationalFunction(Poly([0, 1]))


def test_diagonal_bergman_subtraction():
    # Airy: lim [1/(z-w)^2 - x'x'/(x-x')^2] = 1/(2z)^2
    d = diagonal_bergman_subtraction(airy())
    assert d == RationalFunction(Poly([1]), Poly([0, 0, 4]))
