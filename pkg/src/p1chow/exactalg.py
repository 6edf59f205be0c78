"""Exact arithmetic substrate: weighted-graded sparse polynomials over the
rationals and truncated power series with polynomial coefficients.

Coefficients are ``fractions.Fraction`` throughout; there is no floating-point
mode.  Monomials are dense exponent tuples against a ring's fixed variable
order.  All values are immutable after construction and safe to share across
threads.

Canonical monomial order (used for serialization and printing): ascending by
weighted degree, ties broken lexicographically on the exponent tuple.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

from .kernels import add_terms, mul_terms, neg_terms, scale_terms, sub_terms

Scalar = Union[int, Fraction]


class StructureError(ValueError):
    """Structurally incompatible operands (ring or truncation-order mismatch)."""


class DomainError(ValueError):
    """Operand outside the mathematical domain of an operation."""


class VerificationError(AssertionError):
    """A named mathematical assertion failed during a verification run."""


@dataclass(frozen=True)
class RingSpec:
    """An ordered list of named variables with positive integer weights.

    The variable order is fixed at construction and drives the canonical
    monomial order and all serialization.
    """

    names: tuple[str, ...]
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.weights):
            raise StructureError("names and weights must have equal length")
        if len(set(self.names)) != len(self.names):
            raise StructureError("variable names must be unique")
        for w in self.weights:
            if not isinstance(w, int) or w <= 0:
                raise StructureError(f"weights must be positive integers, got {w!r}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]  # type: ignore[attr-defined]
        except KeyError:
            raise StructureError(f"unknown variable {name!r}") from None

    def degree(self, exponents: Sequence[int]) -> int:
        """Weighted degree of an exponent tuple."""
        return sum(e * w for e, w in zip(exponents, self.weights))


@lru_cache(maxsize=None)
def base_ring(r: int) -> RingSpec:
    """Variables w1, w2, a1..ar, a2p..arp with weights 1, 2, 1..r, 1..r-1."""
    if r < 1:
        raise DomainError("rank must be >= 1")
    names = ["w1", "w2"]
    weights = [1, 2]
    names += [f"a{i}" for i in range(1, r + 1)]
    weights += list(range(1, r + 1))
    names += [f"a{i}p" for i in range(2, r + 1)]
    weights += [i - 1 for i in range(2, r + 1)]
    return RingSpec(tuple(names), tuple(weights))


@lru_cache(maxsize=None)
def dagger_ring(r: int) -> RingSpec:
    """base_ring(r) without the w1, w2 variables."""
    if r < 1:
        raise DomainError("rank must be >= 1")
    names = [f"a{i}" for i in range(1, r + 1)]
    weights = list(range(1, r + 1))
    names += [f"a{i}p" for i in range(2, r + 1)]
    weights += [i - 1 for i in range(2, r + 1)]
    return RingSpec(tuple(names), tuple(weights))


@lru_cache(maxsize=None)
def relations_ring(r: int, d: int) -> RingSpec:
    """Variables w1, w2, t1..td, u1..u{r+d} with weights 1, 2, 1..d, 1..r+d."""
    if r < 1 or d < 1:
        raise DomainError("need r >= 1 and d >= 1")
    names = ["w1", "w2"]
    weights = [1, 2]
    names += [f"t{i}" for i in range(1, d + 1)]
    weights += list(range(1, d + 1))
    names += [f"u{i}" for i in range(1, r + d + 1)]
    weights += list(range(1, r + d + 1))
    return RingSpec(tuple(names), tuple(weights))


@lru_cache(maxsize=None)
def symmetric_ring(r: int) -> RingSpec:
    """Variables x1..xr with weights 1..r (elementary symmetric slots)."""
    if r < 1:
        raise DomainError("need r >= 1")
    return RingSpec(
        tuple(f"x{i}" for i in range(1, r + 1)),
        tuple(range(1, r + 1)),
    )


def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise StructureError(f"expected an exact scalar, got {type(c).__name__}")


@dataclass(frozen=True)
class GradedPolynomial:
    """Sparse exact-rational polynomial in a ring's weighted variables.

    ``terms`` maps dense exponent tuples to nonzero Fractions.  Construct via
    the factories below or :meth:`from_terms`; never mutate ``terms``.
    """

    ring: RingSpec
    terms: dict

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring: RingSpec) -> "GradedPolynomial":
        return cls(ring, {})

    @classmethod
    def const(cls, ring: RingSpec, c: Scalar) -> "GradedPolynomial":
        c = _as_fraction(c)
        if not c:
            return cls(ring, {})
        return cls(ring, {(0,) * ring.nvars: c})

    @classmethod
    def one(cls, ring: RingSpec) -> "GradedPolynomial":
        return cls.const(ring, 1)

    @classmethod
    def variable(cls, ring: RingSpec, name: str) -> "GradedPolynomial":
        i = ring.index(name)
        expo = tuple(1 if j == i else 0 for j in range(ring.nvars))
        return cls(ring, {expo: Fraction(1)})

    @classmethod
    def from_terms(
        cls, ring: RingSpec, terms: Mapping[tuple[int, ...], Scalar]
    ) -> "GradedPolynomial":
        out: dict = {}
        for expo, c in terms.items():
            expo = tuple(expo)
            if len(expo) != ring.nvars or any(e < 0 for e in expo):
                raise StructureError(f"bad exponent tuple {expo!r}")
            c = _as_fraction(c)
            if c:
                prev = out.get(expo)
                if prev is None:
                    out[expo] = c
                else:
                    s = prev + c
                    if s:
                        out[expo] = s
                    else:
                        del out[expo]
        return cls(ring, out)

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def coefficient(self, monomial: Mapping[str, int]) -> Fraction:
        """Coefficient of the monomial given as a name -> exponent map."""
        expo = [0] * self.ring.nvars
        for name, e in monomial.items():
            expo[self.ring.index(name)] = e
        return self.terms.get(tuple(expo), Fraction(0))

    def degrees(self) -> set[int]:
        """Set of weighted degrees of the terms present."""
        return {self.ring.degree(e) for e in self.terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        """True if all terms share one weighted degree (zero counts for any)."""
        degs = self.degrees()
        if not degs:
            return True
        if degree is None:
            return len(degs) == 1
        return degs == {degree}

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in the canonical monomial order."""
        return sorted(
            self.terms.items(), key=lambda kv: (self.ring.degree(kv[0]), kv[0])
        )

    # -- arithmetic --------------------------------------------------------

    def _check_ring(self, other: "GradedPolynomial") -> None:
        if self.ring != other.ring:
            raise StructureError("polynomials live in different rings")

    def __add__(self, other):
        if isinstance(other, GradedPolynomial):
            self._check_ring(other)
            return GradedPolynomial(self.ring, add_terms(self.terms, other.terms))
        if isinstance(other, (int, Fraction)):
            return self + GradedPolynomial.const(self.ring, other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GradedPolynomial):
            self._check_ring(other)
            return GradedPolynomial(self.ring, sub_terms(self.terms, other.terms))
        if isinstance(other, (int, Fraction)):
            return self - GradedPolynomial.const(self.ring, other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return GradedPolynomial(self.ring, neg_terms(self.terms))

    def __mul__(self, other):
        if isinstance(other, GradedPolynomial):
            self._check_ring(other)
            return GradedPolynomial(self.ring, mul_terms(self.terms, other.terms))
        if isinstance(other, (int, Fraction)):
            return GradedPolynomial(
                self.ring, scale_terms(self.terms, _as_fraction(other))
            )
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise DomainError("polynomial powers must be nonnegative integers")
        result = GradedPolynomial.one(self.ring)
        square = self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    # -- calculus and evaluation -------------------------------------------

    def diff(self, name: str) -> "GradedPolynomial":
        """Formal partial derivative with respect to one variable."""
        i = self.ring.index(name)
        out: dict = {}
        for expo, c in self.terms.items():
            e = expo[i]
            if e:
                new = expo[:i] + (e - 1,) + expo[i + 1 :]
                prev = out.get(new)
                v = c * e if prev is None else prev + c * e
                if v:
                    out[new] = v
                elif prev is not None:
                    del out[new]
        return GradedPolynomial(self.ring, out)

    def specialize(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """Exact evaluation at a rational point covering every variable used."""
        values: dict[int, Fraction] = {}
        for name, v in assignment.items():
            values[self.ring.index(name)] = _as_fraction(v)
        total = Fraction(0)
        for expo, c in self.terms.items():
            acc = c
            for i, e in enumerate(expo):
                if e:
                    if i not in values:
                        raise StructureError(
                            f"no value assigned to {self.ring.names[i]!r}"
                        )
                    acc *= values[i] ** e
            total += acc
        return total

    def substitute(
        self,
        target: RingSpec,
        mapping: Mapping[str, Union["GradedPolynomial", Scalar]],
    ) -> "GradedPolynomial":
        """Evaluate at polynomial values; every variable used must be mapped."""
        values: dict[int, GradedPolynomial] = {}
        for name, v in mapping.items():
            if isinstance(v, (int, Fraction)):
                v = GradedPolynomial.const(target, v)
            if v.ring != target:
                raise StructureError("substitution value lives in the wrong ring")
            values[self.ring.index(name)] = v
        powers: dict[tuple[int, int], GradedPolynomial] = {}

        def power(i: int, e: int) -> GradedPolynomial:
            key = (i, e)
            p = powers.get(key)
            if p is None:
                p = values[i] ** e
                powers[key] = p
            return p

        total = GradedPolynomial.zero(target)
        for expo, c in self.terms.items():
            acc = GradedPolynomial.const(target, c)
            for i, e in enumerate(expo):
                if e:
                    if i not in values:
                        raise StructureError(
                            f"no substitution for {self.ring.names[i]!r}"
                        )
                    acc = acc * power(i, e)
            total = total + acc
        return total

    # -- presentation ------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for expo, c in self.sorted_terms():
            factors = [
                f"{self.ring.names[i]}^{e}" if e > 1 else self.ring.names[i]
                for i, e in enumerate(expo)
                if e
            ]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        out = " + ".join(parts)
        return out.replace("+ -", "- ")


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series in a formal weight-1 parameter t, truncated at ``order``.

    ``coeffs[j]`` is the polynomial coefficient of t^j; arithmetic discards
    every t-power beyond ``order``.  Mixing different orders is an error, not
    a silent coercion.
    """

    ring: RingSpec
    order: int
    coeffs: tuple[GradedPolynomial, ...]

    def __post_init__(self) -> None:
        if self.order < 0:
            raise StructureError("order must be nonnegative")
        if len(self.coeffs) != self.order + 1:
            raise StructureError("need exactly order+1 coefficients")
        for c in self.coeffs:
            if c.ring != self.ring:
                raise StructureError("series coefficients live in the wrong ring")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_polys(
        cls,
        ring: RingSpec,
        order: int,
        coeffs: Iterable[Union[GradedPolynomial, Scalar]],
    ) -> "TruncatedSeries":
        out = []
        for c in coeffs:
            if isinstance(c, (int, Fraction)):
                c = GradedPolynomial.const(ring, c)
            out.append(c)
        if len(out) > order + 1:
            raise StructureError("more coefficients than the order allows")
        while len(out) < order + 1:
            out.append(GradedPolynomial.zero(ring))
        return cls(ring, order, tuple(out))

    @classmethod
    def zero(cls, ring: RingSpec, order: int) -> "TruncatedSeries":
        return cls.from_polys(ring, order, [])

    @classmethod
    def one(cls, ring: RingSpec, order: int) -> "TruncatedSeries":
        return cls.from_polys(ring, order, [GradedPolynomial.one(ring)])

    # -- queries -----------------------------------------------------------

    def coefficient(self, j: int) -> GradedPolynomial:
        if not 0 <= j <= self.order:
            raise DomainError(f"coefficient index {j} beyond order {self.order}")
        return self.coeffs[j]

    def truncate(self, order: int) -> "TruncatedSeries":
        """Restrict to a lower (or equal) order; explicit, never silent."""
        if order > self.order:
            raise StructureError("cannot extend a truncated series")
        return TruncatedSeries(self.ring, order, self.coeffs[: order + 1])

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "TruncatedSeries") -> None:
        if self.ring != other.ring:
            raise StructureError("series live in different rings")
        if self.order != other.order:
            raise StructureError(
                f"truncation orders differ ({self.order} vs {other.order})"
            )

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return TruncatedSeries(
                self.ring,
                self.order,
                tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
            )
        if isinstance(other, (int, Fraction, GradedPolynomial)):
            coeffs = list(self.coeffs)
            coeffs[0] = coeffs[0] + other
            return TruncatedSeries(self.ring, self.order, tuple(coeffs))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return TruncatedSeries(
                self.ring,
                self.order,
                tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
            )
        if isinstance(other, (int, Fraction, GradedPolynomial)):
            coeffs = list(self.coeffs)
            coeffs[0] = coeffs[0] - other
            return TruncatedSeries(self.ring, self.order, tuple(coeffs))
        return NotImplemented

    def __neg__(self):
        return TruncatedSeries(self.ring, self.order, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            n = self.order
            out = [GradedPolynomial.zero(self.ring) for _ in range(n + 1)]
            for i, a in enumerate(self.coeffs):
                if a.is_zero():
                    continue
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if not b.is_zero():
                        out[i + j] = out[i + j] + a * b
            return TruncatedSeries(self.ring, n, tuple(out))
        if isinstance(other, (int, Fraction, GradedPolynomial)):
            return TruncatedSeries(
                self.ring, self.order, tuple(c * other for c in self.coeffs)
            )
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise DomainError("series powers must be nonnegative integers")
        result = TruncatedSeries.one(self.ring, self.order)
        square = self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires constant coefficient exactly 1."""
        if self.coeffs[0] != GradedPolynomial.one(self.ring):
            raise DomainError("series inverse requires constant coefficient 1")
        n = self.order
        inv = [GradedPolynomial.one(self.ring)]
        for m in range(1, n + 1):
            s = GradedPolynomial.zero(self.ring)
            for k in range(1, m + 1):
                if not self.coeffs[k].is_zero():
                    s = s + self.coeffs[k] * inv[m - k]
            inv.append(-s)
        return TruncatedSeries(self.ring, n, tuple(inv))

    def integrate(self) -> "TruncatedSeries":
        """Formal integral in t, constant term 0; the order grows by one."""
        out = [GradedPolynomial.zero(self.ring)]
        for j, c in enumerate(self.coeffs):
            out.append(c * Fraction(1, j + 1))
        return TruncatedSeries(self.ring, self.order + 1, tuple(out))

    def exp(self) -> "TruncatedSeries":
        """Formal exponential; requires constant coefficient 0."""
        if not self.coeffs[0].is_zero():
            raise DomainError("series exp requires constant coefficient 0")
        n = self.order
        out = [GradedPolynomial.one(self.ring)]
        for j in range(1, n + 1):
            s = GradedPolynomial.zero(self.ring)
            for k in range(1, j + 1):
                if not self.coeffs[k].is_zero():
                    s = s + (self.coeffs[k] * k) * out[j - k]
            out.append(s * Fraction(1, j))
        return TruncatedSeries(self.ring, n, tuple(out))

    def log(self) -> "TruncatedSeries":
        """Formal logarithm; requires constant coefficient 1."""
        if self.coeffs[0] != GradedPolynomial.one(self.ring):
            raise DomainError("series log requires constant coefficient 1")
        n = self.order
        out = [GradedPolynomial.zero(self.ring)]
        for j in range(1, n + 1):
            s = GradedPolynomial.zero(self.ring)
            for k in range(1, j):
                if not self.coeffs[j - k].is_zero():
                    s = s + (out[k] * k) * self.coeffs[j - k]
            out.append(self.coeffs[j] - s * Fraction(1, j))
        return TruncatedSeries(self.ring, n, tuple(out))

    def __str__(self) -> str:
        parts = []
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if j == 0:
                parts.append(str(c))
            else:
                parts.append(f"({c})*t^{j}" if j > 1 else f"({c})*t")
        return " + ".join(parts) if parts else "0"


# -- spec-named operation aliases -------------------------------------------


def specialize(p: GradedPolynomial, assignment: Mapping[str, Scalar]) -> Fraction:
    return p.specialize(assignment)


def series_inverse(s: TruncatedSeries) -> TruncatedSeries:
    return s.inverse()


def series_integrate(s: TruncatedSeries) -> TruncatedSeries:
    return s.integrate()


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    return s.exp()


def series_log(s: TruncatedSeries) -> TruncatedSeries:
    return s.log()


# -- canonical JSON ----------------------------------------------------------


def poly_to_json(p: GradedPolynomial) -> list:
    """Canonical JSON object: term list in the canonical monomial order."""
    out = []
    for expo, c in p.sorted_terms():
        mono = {p.ring.names[i]: e for i, e in enumerate(expo) if e}
        out.append({"m": mono, "n": str(c.numerator), "d": str(c.denominator)})
    return out


def poly_from_json(ring: RingSpec, obj: list) -> GradedPolynomial:
    terms: dict[tuple[int, ...], Fraction] = {}
    for item in obj:
        expo = [0] * ring.nvars
        for name, e in item["m"].items():
            expo[ring.index(name)] = int(e)
        terms[tuple(expo)] = Fraction(int(item["n"]), int(item["d"]))
    return GradedPolynomial.from_terms(ring, terms)


def series_to_json(s: TruncatedSeries) -> dict:
    return {"order": s.order, "coeffs": [poly_to_json(c) for c in s.coeffs]}


def series_from_json(ring: RingSpec, obj: dict) -> TruncatedSeries:
    coeffs = [poly_from_json(ring, c) for c in obj["coeffs"]]
    return TruncatedSeries.from_polys(ring, int(obj["order"]), coeffs)


def poly_to_json_str(p: GradedPolynomial) -> str:
    return json.dumps(poly_to_json(p), sort_keys=True, separators=(",", ":"))
