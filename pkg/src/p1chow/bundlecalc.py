"""Chern classes of pushforwards of twists of the universal bundle on the
universal P1-bundle.

Three routes are provided:

* ``capital_F`` — the exponential-of-integral generating function F(t) whose
  coefficients f_i, together with a_1..a_r, generate the integral Chow ring of
  the trivialized-P1 stack.
* ``pushforward_chern_mod_w`` — F(t) * (1 + a_1 t + ... + a_r t^r)^(m+1),
  the total Chern class of the pushforward of the m-th twist modulo w_1, w_2.
* ``pushforward_chern_full`` — the Riemann-Roch pipeline on the P1-bundle
  keeping w_1 and w_2: Chern characters of the universal bundle, twist by
  exp(m z), the Todd class of the relative tangent bundle at 2z + w_1, fiber
  integration, and conversion back to Chern classes.

Degrees: the formulas are asserted only up to t-order m*r + ell, where the
higher direct image vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .exactalg import (
    DomainError,
    GradedPolynomial,
    RingSpec,
    StructureError,
    TruncatedSeries,
    base_ring,
    dagger_ring,
)
from .symfunc import char_to_chern, evaluate_at, power_sum_poly


@dataclass(frozen=True)
class FiberedClass:
    """Element base + fiber*z of the P1-bundle Chow ring over the base ring.

    z is the relative hyperplane class; z^2 reduces to -w1*z - w2, and to 0
    when ``mod_w`` is set (then the ring has no w variables at all).
    """

    base: GradedPolynomial
    fiber: GradedPolynomial
    mod_w: bool

    def __post_init__(self) -> None:
        if self.base.ring != self.fiber.ring:
            raise StructureError("base and fiber parts live in different rings")

    @property
    def ring(self) -> RingSpec:
        return self.base.ring

    @classmethod
    def scalar(cls, ring: RingSpec, c, mod_w: bool) -> "FiberedClass":
        return cls(GradedPolynomial.const(ring, c), GradedPolynomial.zero(ring), mod_w)

    @classmethod
    def z(cls, ring: RingSpec, mod_w: bool) -> "FiberedClass":
        return cls(GradedPolynomial.zero(ring), GradedPolynomial.one(ring), mod_w)

    def _check(self, other: "FiberedClass") -> None:
        if self.ring != other.ring or self.mod_w != other.mod_w:
            raise StructureError("incompatible fibered classes")

    def __add__(self, other):
        if isinstance(other, FiberedClass):
            self._check(other)
            return FiberedClass(
                self.base + other.base, self.fiber + other.fiber, self.mod_w
            )
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, FiberedClass):
            self._check(other)
            return FiberedClass(
                self.base - other.base, self.fiber - other.fiber, self.mod_w
            )
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, FiberedClass):
            self._check(other)
            p = self.base * other.base
            cross = self.base * other.fiber + other.base * self.fiber
            if self.mod_w:
                return FiberedClass(p, cross, True)
            zz = self.fiber * other.fiber
            if zz.is_zero():
                return FiberedClass(p, cross, False)
            w1 = GradedPolynomial.variable(self.ring, "w1")
            w2 = GradedPolynomial.variable(self.ring, "w2")
            return FiberedClass(p - w2 * zz, cross - w1 * zz, False)
        if isinstance(other, (int, Fraction, GradedPolynomial)):
            return FiberedClass(self.base * other, self.fiber * other, self.mod_w)
        return NotImplemented

    __rmul__ = __mul__

    def pushforward(self) -> GradedPolynomial:
        """Fiber integration: base + fiber*z maps to fiber."""
        return self.fiber

    def is_zero(self) -> bool:
        return self.base.is_zero() and self.fiber.is_zero()


@dataclass(frozen=True)
class BundleParams:
    """Parameters of one pushforward computation.

    ``ell`` is the relative degree of the bundle (the canonical residue range
    is 0 <= ell < r, but any nonnegative degree is accepted: the twist
    identities need degrees beyond one period).  ``order`` defaults to
    m*r + ell, the largest t-order at which the formulas are asserted.
    """

    r: int
    ell: int
    m: int
    order: int | None = None
    mod_w: bool = True

    def __post_init__(self) -> None:
        if self.r < 1:
            raise DomainError("rank must be >= 1")
        if self.ell < 0:
            raise DomainError("degree must be >= 0")
        if self.m < 0:
            raise DomainError("twist must be >= 0")
        if self.order is not None and self.order < 0:
            raise DomainError("order must be >= 0")

    @property
    def asserted_order(self) -> int:
        return self.m * self.r + self.ell


@lru_cache(maxsize=None)
def capital_F(r: int, ell: int, order: int) -> TruncatedSeries:
    """F(t) = exp( integral of
    [ell*(a1 + a2 t + ... + ar t^(r-1)) - (a2p + a3p t + ... + arp t^(r-2))]
    / (1 + a1 t + ... + ar t^r) dt ), truncated at ``order``.

    Lives over dagger_ring(r); the relative degree ell enters as the integer
    value of the would-be class a1p.
    """
    if r < 1 or ell < 0 or order < 0:
        raise DomainError("need r >= 1, ell >= 0, order >= 0")
    ring = dagger_ring(r)
    if order == 0:
        return TruncatedSeries.one(ring, 0)
    m = order - 1
    a = [GradedPolynomial.variable(ring, f"a{i}") for i in range(1, r + 1)]
    num = TruncatedSeries.from_polys(
        ring, m, [a[i] * ell for i in range(min(r, m + 1))]
    )
    if r >= 2:
        ap = [GradedPolynomial.variable(ring, f"a{i}p") for i in range(2, r + 1)]
        num = num - TruncatedSeries.from_polys(ring, m, ap[: m + 1])
    den_coeffs: list[GradedPolynomial] = [GradedPolynomial.one(ring)]
    den_coeffs += [a[i] for i in range(min(r, m))]
    den = TruncatedSeries.from_polys(ring, m, den_coeffs)
    integrand = num * den.inverse()
    return integrand.integrate().exp()


def chern_series(ring: RingSpec, r: int, order: int) -> TruncatedSeries:
    """1 + a1 t + ... + ar t^r truncated at ``order``."""
    coeffs: list[GradedPolynomial] = [GradedPolynomial.one(ring)]
    for i in range(1, min(r, order) + 1):
        coeffs.append(GradedPolynomial.variable(ring, f"a{i}"))
    return TruncatedSeries.from_polys(ring, order, coeffs)


def pushforward_chern_mod_w(params: BundleParams) -> TruncatedSeries:
    """Total Chern class of the pushforward of the m-th twist, modulo w1, w2:
    F(t) * (1 + a1 t + ... + ar t^r)^(m+1), truncated at min(order, m*r+ell).
    """
    if not params.mod_w:
        raise StructureError("params request the full computation; use "
                             "pushforward_chern_full")
    n = params.asserted_order
    if params.order is not None:
        n = min(params.order, n)
    ring = dagger_ring(params.r)
    f = capital_F(params.r, params.ell, n)
    return f * chern_series(ring, params.r, n) ** (params.m + 1)


@lru_cache(maxsize=None)
def _todd_coefficients(order: int) -> tuple[Fraction, ...]:
    """Coefficients of the one-variable Todd series x / (1 - exp(-x))."""
    ring0 = RingSpec((), ())
    # (1 - exp(-x)) / x has coefficient (-1)^k / (k+1)! in degree k.
    g = TruncatedSeries.from_polys(
        ring0,
        order,
        [Fraction((-1) ** k, factorial(k + 1)) for k in range(order + 1)],
    )
    return tuple(c.constant_term() for c in g.inverse().coeffs)


def _graded_mul(
    x: list[FiberedClass], y: list[FiberedClass], zero: FiberedClass
) -> list[FiberedClass]:
    """Convolution of degree-indexed slice lists, truncated to len(x)."""
    n = len(x) - 1
    out = [zero for _ in range(n + 1)]
    for i, xi in enumerate(x):
        if xi.is_zero():
            continue
        for j in range(n + 1 - i):
            yj = y[j]
            if not yj.is_zero():
                out[i + j] = out[i + j] + xi * yj
    return out


def universal_chern_classes(
    r: int, ell: int, mod_w: bool
) -> list[FiberedClass]:
    """c_0..c_r of the universal bundle: c_i = a_i + a_i' z with a_1' = ell."""
    ring = dagger_ring(r) if mod_w else base_ring(r)
    out = [FiberedClass.scalar(ring, 1, mod_w)]
    for i in range(1, r + 1):
        base = GradedPolynomial.variable(ring, f"a{i}")
        if i == 1:
            fiber = GradedPolynomial.const(ring, ell)
        else:
            fiber = GradedPolynomial.variable(ring, f"a{i}p")
        out.append(FiberedClass(base, fiber, mod_w))
    return out


def pushforward_chern_character(params: BundleParams) -> list[GradedPolynomial]:
    """Chern characters ch_0..ch_N of the pushforward of the m-th twist via
    Riemann-Roch on the P1-bundle, keeping w1 and w2.

    ch_0 is the rank ell + (m+1)r as a constant polynomial.
    """
    if params.mod_w:
        raise StructureError("the character pipeline keeps w1, w2; build "
                             "params with mod_w=False")
    n = params.order if params.order is not None else params.asserted_order
    if n > params.asserted_order:
        raise DomainError(
            f"order {n} beyond the asserted range m*r+ell = "
            f"{params.asserted_order}"
        )
    r, ell, m = params.r, params.ell, params.m
    ring = base_ring(r)
    one = FiberedClass.scalar(ring, 1, False)
    zero = FiberedClass.scalar(ring, 0, False)
    top = n + 1  # fiber integration drops the degree by one

    c = universal_chern_classes(r, ell, False)
    values = {f"x{i}": c[i] for i in range(1, r + 1)}
    ch_e = [FiberedClass.scalar(ring, r, False)]
    for j in range(1, top + 1):
        pj = power_sum_poly(j, r)
        ch_e.append(evaluate_at(pj, values, one) * Fraction(1, factorial(j)))

    z = FiberedClass.z(ring, False)
    zpow = [one]
    for _ in range(top):
        zpow.append(zpow[-1] * z)

    # ch(O(m)) = exp(m z), degree slice j = m^j z^j / j!
    ch_twist = [zpow[j] * Fraction(m**j, factorial(j)) for j in range(top + 1)]

    # Todd class of the relative tangent bundle, evaluated at 2z + w1.
    w1 = GradedPolynomial.variable(ring, "w1")
    x = z * 2 + FiberedClass(w1, GradedPolynomial.zero(ring), False)
    xpow = [one]
    for _ in range(top):
        xpow.append(xpow[-1] * x)
    tcoef = _todd_coefficients(top)
    todd = [xpow[k] * tcoef[k] for k in range(top + 1)]

    total = _graded_mul(
        _graded_mul(ch_e, ch_twist, zero), todd, zero
    )
    return [total[j + 1].pushforward() for j in range(n + 1)]


def pushforward_chern_full(params: BundleParams) -> TruncatedSeries:
    """Total Chern class of the pushforward of the m-th twist including the
    w1, w2 terms; setting w1 = w2 = 0 reproduces pushforward_chern_mod_w.
    """
    n = params.order if params.order is not None else params.asserted_order
    ch = pushforward_chern_character(params)
    return char_to_chern(ch[1:], n, ring=base_ring(params.r))


def set_w_to_zero(p: GradedPolynomial, r: int) -> GradedPolynomial:
    """Image of a base_ring(r) polynomial in dagger_ring(r) (w1 = w2 = 0)."""
    ring = dagger_ring(r)
    mapping: dict[str, GradedPolynomial | int] = {"w1": 0, "w2": 0}
    for name in ring.names:
        mapping[name] = GradedPolynomial.variable(ring, name)
    return p.substitute(ring, mapping)


def twist_substitute(p: GradedPolynomial, r: int, ell: int) -> GradedPolynomial:
    """Rewrite a polynomial in the classes of a once-twisted bundle in terms
    of the classes of the untwisted one (modulo w1, w2).

    On classes: a_k stays a_k and a_k' becomes a_k' + (r-k+1) a_{k-1}; the
    integer value of a_1' moves from ell to ell + r.  Applying this to every
    coefficient of the pushforward series for (degree ell + r, twist m - 1)
    yields the series for (degree ell, twist m).
    """
    ring = dagger_ring(r)
    if p.ring != ring:
        p = set_w_to_zero(p, r)
    mapping: dict[str, GradedPolynomial | int] = {}
    for i in range(1, r + 1):
        mapping[f"a{i}"] = GradedPolynomial.variable(ring, f"a{i}")
    for k in range(2, r + 1):
        akp = GradedPolynomial.variable(ring, f"a{k}p")
        prev = GradedPolynomial.variable(ring, f"a{k - 1}")
        mapping[f"a{k}p"] = akp + prev * (r - k + 1)
    return p.substitute(ring, mapping)
