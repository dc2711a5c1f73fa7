"""Float-backend numeric helpers: contour residues and curve evaluation.

These are testing instruments (independent oracles), not part of the exact
pipeline: residues are re-derived by trapezoidal contour integration, which
is spectrally accurate for analytic integrands on circles.
"""

from __future__ import annotations

import cmath

from toprec.scalars import as_float


def contour_integral(f, center=0.0, radius=1e-2, samples=512):
    """(1/2 pi i) * integral of f(z) dz over the circle |z-center| = radius."""
    total = 0j
    for k in range(samples):
        t = cmath.exp(2j * cmath.pi * k / samples)
        z = center + radius * t
        total += f(z) * radius * t
    return total / samples


def contour_residue(f, center=0.0, radius=1e-2, samples=512):
    """Residue of f at ``center`` (f analytic on the circle)."""
    return contour_integral(f, center, radius, samples)


def double_contour(f, c1, r1, c2, r2, samples=128):
    """Iterated (1/2 pi i)^2 double contour integral of f(z, w)."""
    total = 0j
    for k in range(samples):
        t = cmath.exp(2j * cmath.pi * k / samples)
        z = c1 + r1 * t
        inner = contour_integral(lambda w: f(z, w), c2, r2, samples)
        total += inner * r1 * t
    return total / samples


def rf_eval(f, z):
    """Evaluate a RationalFunction at a complex point."""
    return f(complex(z))


def series_eval(s, t):
    return s.evaluate(complex(t))


def curve_point(curve, z):
    """(x(z), y(z)) as complex numbers."""
    return rf_eval(curve.x, z), rf_eval(curve.y, z)


def as_c(x):
    return complex(as_float(x))
