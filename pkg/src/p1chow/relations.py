"""The bi-projective-bundle quotient ring over the classifying base and the
relation classes it produces: normal forms under z^2 = -w1 z - w2 and
zeta^d = -(t1 zeta^(d-1) + ... + td), the top Chern class beta of the twisted
evaluation bundle, fiber integration along the two projectivizations, the
closed-form pushforward of zeta powers, and the f_{i,j} relation classes with
their leading terms.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Mapping

from .exactalg import (
    DomainError,
    GradedPolynomial,
    RingSpec,
    StructureError,
    relations_ring,
)


@lru_cache(maxsize=None)
class _QuotientContext:
    """Cached reduction data for one (r, d) quotient ring."""

    def __init__(self, r: int, d: int) -> None:
        if r < 1 or d < 1:
            raise DomainError("need r >= 1 and d >= 1")
        self.r = r
        self.d = d
        self.ring = relations_ring(r, d)
        ring = self.ring
        self.one = GradedPolynomial.one(ring)
        self.zero = GradedPolynomial.zero(ring)
        self.w1 = GradedPolynomial.variable(ring, "w1")
        self.w2 = GradedPolynomial.variable(ring, "w2")
        self.t = [GradedPolynomial.variable(ring, f"t{i}") for i in range(1, d + 1)]
        self.u = [GradedPolynomial.variable(ring, f"u{i}") for i in range(1, r + d + 1)]
        self._zpow: list[tuple[GradedPolynomial, GradedPolynomial]] = [
            (self.one, self.zero),
            (self.zero, self.one),
        ]
        self._zetapow: list[list[GradedPolynomial]] = [
            [self.one if b == j else self.zero for b in range(d)] for j in range(d)
        ]
        self._lock = threading.Lock()

    def z_power(self, a: int) -> tuple[GradedPolynomial, GradedPolynomial]:
        """Normal form of z^a as (base, coefficient of z)."""
        with self._lock:
            while len(self._zpow) <= a:
                p, q = self._zpow[-1]
                # z * (p + q z) = -w2 q + (p - w1 q) z
                self._zpow.append((-(self.w2 * q), p - self.w1 * q))
            return self._zpow[a]

    def zeta_power(self, b: int) -> list[GradedPolynomial]:
        """Normal form of zeta^b as coefficients of zeta^0..zeta^(d-1)."""
        with self._lock:
            while len(self._zetapow) <= b:
                prev = self._zetapow[-1]
                top = prev[self.d - 1]
                nxt = [self.zero] + prev[: self.d - 1]
                if not top.is_zero():
                    for i in range(1, self.d + 1):
                        nxt[self.d - i] = nxt[self.d - i] - top * self.t[i - 1]
                self._zetapow.append(nxt)
            return self._zetapow[b]


@dataclass(frozen=True)
class BiProjElement:
    """Normal-form element of the quotient ring: a table of base-ring
    coefficients gamma[(a, b)] of z^a zeta^b with a <= 1 and b <= d-1."""

    r: int
    d: int
    table: dict

    @property
    def ring(self) -> RingSpec:
        return relations_ring(self.r, self.d)

    def coefficient(self, a: int, b: int) -> GradedPolynomial:
        got = self.table.get((a, b))
        if got is not None:
            return got
        return GradedPolynomial.zero(self.ring)

    def _check(self, other: "BiProjElement") -> None:
        if (self.r, self.d) != (other.r, other.d):
            raise StructureError("elements live in different quotient rings")

    def __add__(self, other: "BiProjElement") -> "BiProjElement":
        self._check(other)
        table = dict(self.table)
        for key, val in other.table.items():
            s = table.get(key)
            s = val if s is None else s + val
            if s.is_zero():
                table.pop(key, None)
            else:
                table[key] = s
        return BiProjElement(self.r, self.d, table)

    def __sub__(self, other: "BiProjElement") -> "BiProjElement":
        return self + (other * Fraction(-1))

    def __mul__(self, other):
        if isinstance(other, BiProjElement):
            self._check(other)
            raw: dict = {}
            for (a1, b1), g1 in self.table.items():
                for (a2, b2), g2 in other.table.items():
                    key = (a1 + a2, b1 + b2)
                    prod = g1 * g2
                    prev = raw.get(key)
                    raw[key] = prod if prev is None else prev + prod
            return reduce(raw, self.r, self.d)
        if isinstance(other, (int, Fraction, GradedPolynomial)):
            table = {}
            for key, val in self.table.items():
                scaled = val * other
                if not scaled.is_zero():
                    table[key] = scaled
            return BiProjElement(self.r, self.d, table)
        return NotImplemented

    __rmul__ = __mul__

    def is_homogeneous_of_codim(self, n: int) -> bool:
        """True if each gamma[(a, b)] is homogeneous of degree n - a - b."""
        return all(
            val.is_homogeneous(n - a - b) for (a, b), val in self.table.items()
        )


def reduce(
    expr: Mapping[tuple[int, int], GradedPolynomial], r: int, d: int
) -> BiProjElement:
    """Normal form of a polynomial in z and zeta, given as a map from
    (z-degree, zeta-degree) to base-ring coefficients."""
    ctx = _QuotientContext(r, d)
    table: dict = {}
    for (a, b), gamma in expr.items():
        if a < 0 or b < 0:
            raise DomainError("negative exponents are not ring elements")
        if gamma.ring != ctx.ring:
            raise StructureError("coefficient lives in the wrong ring")
        if gamma.is_zero():
            continue
        zp, zq = ctx.z_power(a)
        zeta = ctx.zeta_power(b)
        for bb in range(d):
            zv = zeta[bb]
            if zv.is_zero():
                continue
            for aa, part in ((0, zp), (1, zq)):
                if part.is_zero():
                    continue
                val = gamma * part * zv
                key = (aa, bb)
                prev = table.get(key)
                s = val if prev is None else prev + val
                if s.is_zero():
                    table.pop(key, None)
                else:
                    table[key] = s
    return BiProjElement(r, d, table)


def monomial(r: int, d: int, a: int = 0, b: int = 0) -> BiProjElement:
    """The normal form of z^a zeta^b."""
    ctx = _QuotientContext(r, d)
    return reduce({(a, b): ctx.one}, r, d)


@lru_cache(maxsize=None)
def beta_class(r: int, d: int) -> BiProjElement:
    """Top Chern class of the twisted evaluation bundle:
    reduce( sum_{i=0}^{r+d} (zeta + z)^(r+d-i) * u_i ) with u_0 = 1."""
    ctx = _QuotientContext(r, d)
    raw: dict = {}
    for i in range(r + d + 1):
        coeff = ctx.one if i == 0 else ctx.u[i - 1]
        k = r + d - i
        for j in range(k + 1):
            key = (j, k - j)
            val = coeff * comb(k, j)
            prev = raw.get(key)
            raw[key] = val if prev is None else prev + val
    return reduce(raw, r, d)


def sigma_pushforward(el: BiProjElement) -> GradedPolynomial:
    """Fiber integration to the base: only the z zeta^(d-1) cell survives."""
    return el.coefficient(1, el.d - 1)


def closed_pushforward(
    i: int, d: int, ring: RingSpec | None = None
) -> GradedPolynomial:
    """The pushforward of z zeta^(d-1+i) in closed form: 0 for i < 0, 1 for
    i = 0, and for i >= 1 the signed count of ordered partitions of i into
    parts 1..d, with part j appearing m_j times contributing
    (-1)^(m_1+...+m_d) (m_1+...+m_d)! / (m_1! ... m_d!) t_1^m_1 ... t_d^m_d.
    """
    if d < 1:
        raise DomainError("need d >= 1")
    if ring is None:
        ring = relations_ring(1, d)
    if i < 0:
        return GradedPolynomial.zero(ring)
    if i == 0:
        return GradedPolynomial.one(ring)
    total = GradedPolynomial.zero(ring)
    t_index = [ring.index(f"t{j}") for j in range(1, d + 1)]

    def walk(j: int, remaining: int, ms: list[int]) -> None:
        nonlocal total
        if j > d:
            if remaining:
                return
            count = factorial(sum(ms))
            for m in ms:
                count //= factorial(m)
            sign = -1 if sum(ms) % 2 else 1
            expo = [0] * ring.nvars
            for idx, m in zip(t_index, ms):
                expo[idx] = m
            total = total + GradedPolynomial.from_terms(
                ring, {tuple(expo): Fraction(sign * count)}
            )
            return
        for m in range(remaining // j + 1):
            walk(j + 1, remaining - m * j, ms + [m])

    walk(1, i, [])
    return total


def f_class(i: int, j: int, r: int, d: int) -> GradedPolynomial:
    """The relation class f_{i,j}: fiber integration of beta * z^i zeta^j.
    Homogeneous of degree r + i + j."""
    if i not in (0, 1):
        raise DomainError("z-exponent must be 0 or 1")
    if not 0 <= j <= d - 1:
        raise DomainError("zeta-exponent must lie in 0..d-1")
    beta = beta_class(r, d)
    shifted = {(a + i, b + j): g for (a, b), g in beta.table.items()}
    return sigma_pushforward(reduce(shifted, r, d))


def leading_parts(
    f: GradedPolynomial, r: int, d: int, degree: int
) -> dict[str, Fraction | None]:
    """Coefficients of the singleton monomials t_degree and u_degree in f
    (None when the variable does not exist in the ring)."""
    out: dict[str, Fraction | None] = {}
    out["t"] = f.coefficient({f"t{degree}": 1}) if degree <= d else None
    out["u"] = f.coefficient({f"u{degree}": 1}) if degree <= r + d else None
    return out


def leading_matrix_determinant(r: int, d: int, j: int) -> int:
    """Determinant of the 2x2 leading-coefficient matrix
    [[-1, 1], [-(r+d), d-j]] used to eliminate the degree r+j generators."""
    return (-1) * (d - j) - 1 * (-(r + d))
