import itertools
from fractions import Fraction

import pytest

from toprec.algebra import Poly, RationalFunction
from toprec.curve import SpectralCurve
from toprec.dvv import dvv_intersection
from toprec.recursion import (Correlator, FrameOrderError, Recursion,
                              needed_frame_order)

F = Fraction


def z_poly():
    return Poly([0, 1])


def airy():
    z = RationalFunction(z_poly())
    return SpectralCurve(z ** 2, z)


def catalan_curve():
    z = RationalFunction(z_poly())
    return SpectralCurve(z + 1 / z, z)


def cubic_curve():
    z = RationalFunction(z_poly())
    return SpectralCurve(z ** 2, z + z ** 3)


def test_airy_w03():
    # one-step residue oracle (computed by hand):
    # W_3^(0) = dp1 dp2 dp3 / (2 p1^2 p2^2 p3^2)
    eng = Recursion.for_targets(airy(), 0, 3)
    w = eng.correlator(0, 3)
    assert w.terms == {((0, 2), (0, 2), (0, 2)): F(1, 2)}


def test_airy_w11():
    # single-residue oracle: Res K(p, zeta) B(zeta, -zeta) = dp/(16 p^4)
    eng = Recursion.for_targets(airy(), 1, 1)
    w = eng.correlator(1, 1)
    assert w.terms == {((0, 4),): F(1, 16)}


def test_bergman_and_ydx_are_special():
    eng = Recursion.for_targets(airy(), 1, 1)
    assert eng.correlator(0, 1).special == "ydx"
    assert eng.correlator(0, 2).special == "bergman"
    with pytest.raises(ValueError):
        eng.correlator(0, 0)


def test_symmetry_small_tensors():
    for curve in (airy(), catalan_curve()):
        eng = Recursion.for_targets(curve, 1, 4)
        for h, k in [(0, 3), (0, 4), (1, 2)]:
            assert eng.correlator(h, k).is_symmetric(), (h, k)


def test_no_residues_and_order_bound():
    for curve in (airy(), catalan_curve(), cubic_curve()):
        eng = Recursion.for_targets(curve, 2, 2)
        for h, k in [(0, 3), (1, 1), (1, 2), (2, 1)]:
            w = eng.correlator(h, k)
            orders = {m for key in w.terms for (_, m) in key}
            assert all(m >= 2 for m in orders), (h, k)
            assert max(orders) <= 6 * h - 4 + 2 * k, (h, k)


def test_frame_parity_even_principal_parts():
    # in the local frame the principal part has even exponents only,
    # equivalently W(zeta) + W(-zeta) is regular at every branch point
    curve = catalan_curve()
    eng = Recursion.for_targets(curve, 2, 2)
    for h, k in [(1, 1), (2, 1)]:
        w = eng.correlator(h, k)
        for bi in range(len(curve.branch_points())):
            ser = eng.eval_series(w, 0, bi)[()]
            assert all(n % 2 == 0 for n, c in ser.to_pairs() if n < 0 and c)
            holo = ser + (-ser.substitute_neg())
            assert holo.valuation() >= 0


def test_eval_series_of_bergman_like_slot():
    # expansion of W_2^(0)-adjacent data: for a stable correlator, a slot
    # with no pole at a branch point expands with valuation >= 0
    curve = catalan_curve()
    eng = Recursion.for_targets(curve, 0, 3)
    w = eng.correlator(0, 3)
    only_branch0 = Correlator(0, 3, {k: v for k, v in w.terms.items()
                                     if k[0][0] == 1})
    ser = eng.eval_series(only_branch0, 0, 0)
    assert all(s.valuation() >= 0 for s in ser.values())


def test_substitute_and_correlator_at_agree():
    curve = catalan_curve()
    eng = Recursion.for_targets(curve, 1, 2)
    w = eng.correlator(1, 2)
    p = F(3)
    direct = eng.correlator_at(1, (p,))
    via_tensor = {}
    for key, c in w.substitute(1, p, curve).terms.items():
        via_tensor[key[0]] = via_tensor.get(key[0], 0) + c
    assert direct == {k: v for k, v in via_tensor.items() if v != 0}


def test_frame_order_guard():
    eng = Recursion(airy(), order=10)
    with pytest.raises(FrameOrderError):
        eng.correlator(2, 2)
    assert needed_frame_order(2, 2) > 10


def norm_const(eng):
    # one-time normalization solved from <tau_0^3> = 1
    w = eng.correlator(0, 3)
    return w.terms[((0, 2), (0, 2), (0, 2))]


def dfact(n):
    out = 1
    k = 2 * n + 1
    while k > 1:
        out *= k
        k -= 2
    return out


def test_airy_reduces_to_intersection_numbers():
    """Pole-basis coefficients = C^(2g-2+n) prod (2d_s+1)!! <prod tau_d>_g."""
    eng = Recursion.for_targets(airy(), 2, 4)
    C = norm_const(eng)
    assert C == F(1, 2)
    for g, n in [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)]:
        w = eng.correlator(g, n)
        seen = {}
        for key, coeff in w.terms.items():
            ds = tuple(sorted(((m - 2) // 2 for (_, m) in key), reverse=True))
            assert all((m - 2) % 2 == 0 for (_, m) in key)
            seen.setdefault(ds, set()).add(coeff)
        for ds, coeffs in seen.items():
            expected = (C ** (2 * g - 2 + n)
                        * F(int(_prod(dfact(d) for d in ds)))
                        * dvv_intersection(ds, g))
            assert coeffs == {expected}, (g, n, ds)


def _prod(it):
    out = 1
    for x in it:
        out *= x
    return out
