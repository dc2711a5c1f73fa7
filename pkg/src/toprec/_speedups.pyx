# cython: boundscheck=False, wraparound=False
"""Compiled kernels for dense coefficient arithmetic.

Same contracts as ``toprec._kernels_py``.  Coefficients stay generic Python
objects (exact rationals dominate), so the win here is loop and indexing
overhead, not the arithmetic itself; that is still a 2-4x cut on the series
products that dominate the residue recursion.
"""

IMPLEMENTATION = "cython"


def convolve(list a, list b):
    cdef Py_ssize_t na = len(a), nb = len(b)
    cdef Py_ssize_t i, j, k
    if na == 0 or nb == 0:
        return []
    cdef list out = [None] * (na + nb - 1)
    cdef object ai, bj, cur
    for i in range(na):
        ai = a[i]
        if not ai:
            continue
        for j in range(nb):
            bj = b[j]
            if not bj:
                continue
            k = i + j
            cur = out[k]
            if cur is None:
                out[k] = ai * bj
            else:
                out[k] = cur + ai * bj
    zero = a[0] * 0
    for k in range(na + nb - 1):
        if out[k] is None:
            out[k] = zero
    return out


def convolve_trunc(list a, list b, Py_ssize_t keep):
    cdef Py_ssize_t na = len(a), nb = len(b)
    cdef Py_ssize_t i, j, k, jmax
    if keep <= 0:
        return []
    cdef list out = [None] * keep
    cdef object ai, bj, cur
    for i in range(na):
        if i >= keep:
            break
        ai = a[i]
        if not ai:
            continue
        jmax = nb if nb < keep - i else keep - i
        for j in range(jmax):
            bj = b[j]
            if not bj:
                continue
            k = i + j
            cur = out[k]
            if cur is None:
                out[k] = ai * bj
            else:
                out[k] = cur + ai * bj
    if na and nb:
        zero = a[0] * 0
    else:
        zero = 0
    for k in range(keep):
        if out[k] is None:
            out[k] = zero
    return out


def power_series_inverse(list a, Py_ssize_t keep, object one):
    cdef Py_ssize_t m, k, kmax, na = len(a)
    if keep <= 0:
        return []
    cdef object a0 = a[0]
    cdef object inv0 = one / a0
    cdef list out = [inv0]
    cdef object s, ak, t
    for m in range(1, keep):
        s = None
        kmax = m if m < na - 1 else na - 1
        for k in range(1, kmax + 1):
            ak = a[k]
            if not ak:
                continue
            t = ak * out[m - k]
            if s is None:
                s = t
            else:
                s = s + t
        if s is None:
            out.append(inv0 * 0)
        else:
            out.append(-s * inv0)
    return out
