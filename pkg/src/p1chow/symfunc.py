"""Symmetric-function conversions: power sums in the elementary symmetric
generators via the Newton recurrence, their partials, and the translations
between total Chern classes and Chern characters.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .exactalg import (
    DomainError,
    GradedPolynomial,
    RingSpec,
    TruncatedSeries,
    symmetric_ring,
)

_ps_cache: dict[tuple[int, int], GradedPolynomial] = {}
_ps_lock = threading.Lock()


def power_sum_poly(j: int, r: int) -> GradedPolynomial:
    """The polynomial expressing the j-th power sum in x1..xr, where xi stands
    for the i-th elementary symmetric function of r formal roots.

    Computed by the Newton recurrence
    p_j = x1*p_{j-1} - x2*p_{j-2} + ... + (-1)^j * j * xj,
    dropping terms whose index exceeds r.  Memoized per (j, r).
    """
    if j < 1 or r < 1:
        raise DomainError("need j >= 1 and r >= 1")
    key = (j, r)
    cached = _ps_cache.get(key)
    if cached is not None:
        return cached
    ring = symmetric_ring(r)
    x = [GradedPolynomial.variable(ring, f"x{i}") for i in range(1, r + 1)]
    p = GradedPolynomial.zero(ring)
    for i in range(1, min(j, r) + 1):
        if i == j:
            term = x[i - 1] * ((-1) ** (i - 1) * i)
        else:
            term = x[i - 1] * power_sum_poly(j - i, r) * ((-1) ** (i - 1))
        p = p + term
    with _ps_lock:
        _ps_cache.setdefault(key, p)
    return p


def power_sum_partial(j: int, i: int, r: int) -> GradedPolynomial:
    """Formal partial derivative of power_sum_poly(j, r) with respect to xi.

    Identically zero when j < i.
    """
    if not 1 <= i <= r:
        raise DomainError("need 1 <= i <= r")
    if j < i:
        return GradedPolynomial.zero(symmetric_ring(r))
    return power_sum_poly(j, r).diff(f"x{i}")


def evaluate_at(p: GradedPolynomial, values: Mapping[str, object], one):
    """Evaluate a polynomial at values in any commutative ring.

    ``one`` is the target ring's unit, used to seed monomial products; values
    must support +, * among themselves and * by Fraction.
    """
    total = one * Fraction(0)
    for expo, c in p.terms.items():
        acc = one * c
        for i, e in enumerate(expo):
            for _ in range(e):
                acc = acc * values[p.ring.names[i]]
        total = total + acc
    return total


def chern_to_char(c: TruncatedSeries) -> list[GradedPolynomial]:
    """Chern characters ch_1..ch_N of a total Chern class series.

    ch_j = p_j(c_1, ..., c_j) / j!; requires constant coefficient 1.
    """
    if c.coeffs[0] != GradedPolynomial.one(c.ring):
        raise DomainError("total Chern class must have constant coefficient 1")
    n = c.order
    out = []
    for j in range(1, n + 1):
        pj = power_sum_poly(j, n)
        mapping = {f"x{i}": c.coeffs[i] for i in range(1, j + 1)}
        chj = pj.substitute(c.ring, mapping) * Fraction(1, factorial(j))
        out.append(chj)
    return out


def char_to_chern(
    ch: Sequence[GradedPolynomial], order: int, ring: RingSpec | None = None
) -> TruncatedSeries:
    """Total Chern class from Chern characters ch_1..ch_order.

    Inverse of :func:`chern_to_char`:
    c(t) = exp(sum_j (j-1)! (-1)^(j+1) ch_j t^j).
    """
    if len(ch) < order:
        raise DomainError(f"need ch_1..ch_{order}, got {len(ch)}")
    if ring is None:
        if not ch:
            raise DomainError("cannot infer the ring from an empty character list")
        ring = ch[0].ring
    coeffs: list[GradedPolynomial] = [GradedPolynomial.zero(ring)]
    for j in range(1, order + 1):
        sign = 1 if j % 2 else -1
        coeffs.append(ch[j - 1] * (sign * factorial(j - 1)))
    return TruncatedSeries(ring, order, tuple(coeffs)).exp()
