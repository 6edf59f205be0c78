# cython: language_level=3
"""Compiled term-dict kernels.

Same contract as ``_pykernels`` (the reference implementation): term dicts map
exponent tuples to nonzero Fractions, results are always normalized.  The
multiplication kernel accumulates numerator/denominator integer pairs and
builds Fractions only for the surviving output terms, which avoids most of the
per-pair Fraction construction cost.
"""

from fractions import Fraction

from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_GET_ITEM, PyTuple_GET_SIZE, PyTuple_New, PyTuple_SET_ITEM

from math import gcd

BACKEND = "c"


cdef inline tuple _eadd(tuple ea, tuple eb):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(ea)
    cdef tuple out = PyTuple_New(n)
    cdef object v
    for i in range(n):
        v = (<object>PyTuple_GET_ITEM(ea, i)) + (<object>PyTuple_GET_ITEM(eb, i))
        Py_INCREF(v)
        PyTuple_SET_ITEM(out, i, v)
    return out


def add_terms(dict a, dict b):
    """Return a + b; the result shares no structure with the inputs."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    cdef object e, c, v
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = c
        else:
            v = v + c
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def sub_terms(dict a, dict b):
    """Return a - b."""
    if not b:
        return dict(a)
    cdef dict out = dict(a)
    cdef object e, c, v
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = -c
        else:
            v = v - c
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def neg_terms(dict a):
    """Return -a."""
    cdef dict out = {}
    cdef object e, c
    for e, c in a.items():
        out[e] = -c
    return out


def scale_terms(dict a, c):
    """Return c * a for a scalar c."""
    if not c:
        return {}
    cdef dict out = {}
    cdef object e, v
    for e, v in a.items():
        out[e] = v * c
    return out


def mul_terms(dict a, dict b):
    """Return a * b by distributing over all term pairs."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    # Pre-split the larger operand's coefficients into (exponents, num, den).
    cdef list bitems = []
    cdef object e, c
    for e, c in b.items():
        bitems.append((e, c.numerator, c.denominator))
    cdef dict acc = {}
    cdef Py_ssize_t j, nb = len(bitems)
    cdef tuple ea, item, key
    cdef object ca, na, da, n, d, cell, cn, cd, g
    for ea, ca in a.items():
        na = ca.numerator
        da = ca.denominator
        for j in range(nb):
            item = <tuple>bitems[j]
            key = _eadd(ea, <tuple>PyTuple_GET_ITEM(item, 0))
            n = na * <object>PyTuple_GET_ITEM(item, 1)
            d = da * <object>PyTuple_GET_ITEM(item, 2)
            cell = acc.get(key)
            if cell is None:
                acc[key] = [n, d]
            else:
                cn = (<list>cell)[0]
                cd = (<list>cell)[1]
                # cn/cd + n/d, reduced enough to keep the integers small
                cn = cn * d + n * cd
                if cn:
                    cd = cd * d
                    g = gcd(cn, cd)
                    if g > 1:
                        cn = cn // g
                        cd = cd // g
                    (<list>cell)[0] = cn
                    (<list>cell)[1] = cd
                else:
                    del acc[key]
    cdef dict out = {}
    for key, cell in acc.items():
        out[key] = Fraction((<list>cell)[0], (<list>cell)[1])
    return out
