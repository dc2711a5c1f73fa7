"""Pure-Python kernels for dense coefficient arithmetic.

These are the hot inner loops of the whole engine: every series product,
reciprocal and composition in the residue recursion funnels through them.
``toprec._speedups`` provides a compiled drop-in replacement; this module is
the reference implementation and the import-time fallback.

Coefficients are arbitrary field elements (``Fraction`` on the exact backend,
``FloatScalar`` on the float backend); only ``+``, ``*``, unary ``-`` and
truthiness are required.
"""

IMPLEMENTATION = "python"


def convolve(a, b):
    """Full convolution of coefficient lists: c[n] = sum a[i]*b[n-i]."""
    na, nb = len(a), len(b)
    if na == 0 or nb == 0:
        return []
    out = [None] * (na + nb - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if not bj:
                continue
            k = i + j
            cur = out[k]
            out[k] = ai * bj if cur is None else cur + ai * bj
    zero = (a[0] if na else b[0]) * 0
    return [zero if c is None else c for c in out]


def convolve_trunc(a, b, keep):
    """First ``keep`` coefficients of convolve(a, b)."""
    if keep <= 0:
        return []
    na, nb = len(a), len(b)
    out = [None] * keep
    for i, ai in enumerate(a):
        if i >= keep:
            break
        if not ai:
            continue
        jmax = min(nb, keep - i)
        for j in range(jmax):
            bj = b[j]
            if not bj:
                continue
            k = i + j
            cur = out[k]
            out[k] = ai * bj if cur is None else cur + ai * bj
    if na and nb:
        zero = a[0] * 0
    else:
        zero = 0
    return [zero if c is None else c for c in out]


def power_series_inverse(a, keep, one):
    """First ``keep`` coefficients of 1/A where A = sum a[n] x^n, a[0] != 0.

    ``one`` is the multiplicative identity of the coefficient field.
    Recurrence: b0 = 1/a0, b_m = -(sum_{k=1..m} a_k b_{m-k}) / a0.
    """
    if keep <= 0:
        return []
    a0 = a[0]
    inv0 = one / a0
    out = [inv0]
    na = len(a)
    for m in range(1, keep):
        s = None
        for k in range(1, min(m, na - 1) + 1):
            ak = a[k]
            if not ak:
                continue
            t = ak * out[m - k]
            s = t if s is None else s + t
        out.append(inv0 * 0 if s is None else -s * inv0)
    return out
