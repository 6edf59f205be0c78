"""Pure-Python term-dict kernels: the hot inner loops of sparse polynomial
arithmetic.

A term dict maps an exponent tuple (one small int per ring variable) to a
nonzero ``Fraction``.  The compiled twin in ``_ckernels.pyx`` implements the
same five functions with identical semantics; ``p1chow.kernels`` picks one at
import time.  Keep the two in sync — ``tests/test_kernels.py`` checks parity.
"""

from __future__ import annotations

from fractions import Fraction

BACKEND = "python"


def add_terms(a: dict, b: dict) -> dict:
    """Return a + b; the result shares no structure with the inputs."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
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


def sub_terms(a: dict, b: dict) -> dict:
    """Return a - b."""
    if not b:
        return dict(a)
    out = dict(a)
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


def neg_terms(a: dict) -> dict:
    """Return -a."""
    return {e: -c for e, c in a.items()}


def scale_terms(a: dict, c: Fraction) -> dict:
    """Return c * a for a scalar c."""
    if not c:
        return {}
    return {e: v * c for e, v in a.items()}


def mul_terms(a: dict, b: dict) -> dict:
    """Return a * b by distributing over all term pairs."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    bitems = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bitems:
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e)
            if v is None:
                out[e] = ca * cb
            else:
                v = v + ca * cb
                if v:
                    out[e] = v
                else:
                    del out[e]
    return out
