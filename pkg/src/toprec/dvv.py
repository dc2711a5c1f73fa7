"""Psi-class intersection numbers <tau_{d_1} ... tau_{d_n}>_g.

Independent oracle for the engine's Airy-curve correlators: the numbers are
generated by the string equation, the dilaton equation and the
Dijkgraaf-Verlinde-Verlinde recursion from the two seeds

    <tau_0^3>_0 = 1,      <tau_1>_1 = 1/24.

Nothing here touches the residue recursion; the two computations meet only
in the cross-check tests.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def _dfact(n):
    """(2n+1)!! for n >= -1 (with (-1)!! = 1)."""
    out = 1
    k = 2 * n + 1
    while k > 1:
        out *= k
        k -= 2
    return out


@lru_cache(maxsize=None)
def _corr(g, ds):
    # ds is a sorted (descending) tuple of non-negative integers
    n = len(ds)
    if g < 0 or n == 0:
        return Fraction(0)
    if sum(ds) != 3 * g - 3 + n:
        return Fraction(0)
    if g == 0 and n < 3:
        return Fraction(0)
    if g == 1 and n == 0:
        return Fraction(0)
    if (g, ds) == (0, (0, 0, 0)):
        return Fraction(1)
    if (g, ds) == (1, (1,)):
        return Fraction(1, 24)
    d0, rest = ds[0], ds[1:]
    if d0 == 0:
        # string equation
        acc = Fraction(0)
        for j, dj in enumerate(rest):
            if dj >= 1:
                acc += _corr(g, _key(rest[:j] + (dj - 1,) + rest[j + 1:]))
        return acc
    if d0 == 1:
        # dilaton equation
        return (2 * g - 2 + n - 1) * _corr(g, _key(rest))
    # DVV recursion on the largest index
    acc = Fraction(0)
    for j, dj in enumerate(rest):
        others = rest[:j] + rest[j + 1:]
        acc += (Fraction(_dfact(d0 + dj - 1), _dfact(dj - 1))
                * _corr(g, _key((d0 + dj - 1,) + others)))
    quad = Fraction(0)
    for a in range(0, d0 - 1):
        b = d0 - 2 - a
        w = _dfact(a) * _dfact(b)
        quad += w * _corr(g - 1, _key((a, b) + rest))
        for gi in range(0, g + 1):
            for subset in _subsets(rest):
                left = (a,) + subset
                right = (b,) + _complement(rest, subset)
                if 2 * gi - 2 + len(left) <= 0:
                    continue
                if 2 * (g - gi) - 2 + len(right) <= 0:
                    continue
                quad += w * _corr(gi, _key(left)) * _corr(g - gi, _key(right))
    acc += Fraction(1, 2) * quad
    return acc / _dfact(d0)


def _key(ds):
    return tuple(sorted(ds, reverse=True))


def _subsets(items):
    n = len(items)
    for mask in range(1 << n):
        yield tuple(items[i] for i in range(n) if mask >> i & 1)


def _complement(items, subset):
    pool = list(subset)
    out = []
    for x in items:
        if x in pool:
            pool.remove(x)
        else:
            out.append(x)
    return tuple(out)


def dvv_intersection(ds, g):
    """<tau_{d_1} ... tau_{d_n}>_g as an exact rational.

    Returns 0 when the dimension constraint sum(d) = 3g-3+n fails.
    """
    ds = tuple(int(d) for d in ds)
    if any(d < 0 for d in ds):
        raise ValueError("descendent indices must be non-negative")
    return _corr(int(g), _key(ds))
