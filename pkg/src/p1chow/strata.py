"""Splitting-type combinatorics and the rank bookkeeping of the splitting-locus
stratification: the codimension invariant u, bounded enumeration of types,
Hilbert series of stratum and ambient rings, and the rank-equality and
complement-codimension checks as truncated generating-function identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .exactalg import DomainError, StructureError


@dataclass(frozen=True, order=True)
class SplittingType:
    """A weakly increasing integer vector e1 <= ... <= er."""

    e: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.e:
            raise StructureError("splitting type must be nonempty")
        if any(a > b for a, b in zip(self.e, self.e[1:])):
            raise StructureError("splitting type must be weakly increasing")

    @property
    def rank(self) -> int:
        return len(self.e)

    @property
    def degree(self) -> int:
        return sum(self.e)

    def multiplicities(self) -> list[tuple[int, int]]:
        """Distinct values with their multiplicities, ascending."""
        out: list[tuple[int, int]] = []
        for v in self.e:
            if out and out[-1][0] == v:
                out[-1] = (v, out[-1][1] + 1)
            else:
                out.append((v, 1))
        return out


def u_invariant(e: SplittingType | Iterable[int]) -> int:
    """Codimension of the stratum of splitting type e:
    sum over ordered pairs (i, j) of max(0, e_i - e_j - 1).
    """
    vec = e.e if isinstance(e, SplittingType) else tuple(e)
    total = 0
    for ei in vec:
        for ej in vec:
            gap = ei - ej - 1
            if gap > 0:
                total += gap
    return total


def enumerate_types(r: int, ell: int, umax: int) -> list[SplittingType]:
    """All splitting types of rank r and degree ell with u(e) <= umax,
    sorted lexicographically.

    A single pair at spread g contributes g - 1 to u, so any admissible type
    has spread e_r - e_1 <= umax + 1; the scan is over that window.
    """
    if r < 1:
        raise DomainError("rank must be >= 1")
    if umax < 0:
        return []
    spread = umax + 1
    out: list[SplittingType] = []
    # e1 ranges so that r*e1 <= ell <= r*(e1 + spread)
    e1_lo = -((-(ell - r * spread)) // r)  # ceil((ell - r*spread) / r)
    e1_hi = ell // r
    for e1 in range(e1_lo, e1_hi + 1):

        def extend(prefix: list[int], remaining: int) -> None:
            k = len(prefix)
            if k == r:
                if remaining == 0:
                    t = SplittingType(tuple(prefix))
                    if u_invariant(t) <= umax:
                        out.append(t)
                return
            lo = prefix[-1]
            hi = e1 + spread
            # the r - k - 1 later entries are each at least the current one
            for v in range(lo, hi + 1):
                rest = remaining - v
                if rest < v * (r - k - 1) or rest > hi * (r - k - 1):
                    continue
                extend(prefix + [v], rest)

        extend([e1], ell - e1)
    out.sort()
    return out


@dataclass(frozen=True)
class IntSeries:
    """Truncated integer power series (a Hilbert series)."""

    coeffs: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, order: int) -> "IntSeries":
        return cls((1,) + (0,) * order)

    def __add__(self, other: "IntSeries") -> "IntSeries":
        if self.order != other.order:
            raise StructureError("order mismatch")
        return IntSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "IntSeries") -> "IntSeries":
        if self.order != other.order:
            raise StructureError("order mismatch")
        n = self.order
        out = [0] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return IntSeries(tuple(out))

    def shift(self, k: int) -> "IntSeries":
        """Multiply by t^k, truncating at the same order."""
        if k == 0:
            return self
        n = self.order
        return IntSeries((0,) * min(k, n + 1) + self.coeffs[: max(0, n + 1 - k)])


def geometric_inverse_factor(k: int, order: int) -> IntSeries:
    """(1 - t^k)^(-1) truncated at ``order``."""
    coeffs = [1 if j % k == 0 else 0 for j in range(order + 1)]
    return IntSeries(tuple(coeffs))


def free_algebra_hilbert(weights: Iterable[int], order: int) -> IntSeries:
    """Hilbert series of a free graded algebra on generators of the given
    weights: the product of (1 - t^w)^(-1)."""
    out = IntSeries.one(order)
    for w in weights:
        out = out * geometric_inverse_factor(w, order)
    return out


def stratum_hilbert(e: SplittingType, order: int, dagger: bool) -> IntSeries:
    """Hilbert series of the Chow ring of the stratum of type e: one block of
    Chern-class generators per distinct value, plus a rank-2 block of weights
    1, 2 unless ``dagger``."""
    weights: list[int] = []
    for _, mult in e.multiplicities():
        weights.extend(range(1, mult + 1))
    if not dagger:
        weights.extend((1, 2))
    return free_algebra_hilbert(weights, order)


def ambient_hilbert(r: int, order: int, dagger: bool) -> IntSeries:
    """Hilbert series of the ambient free algebra: generators of weights
    1..r and 1..r-1, plus weights 1, 2 unless ``dagger``."""
    weights = list(range(1, r + 1)) + list(range(1, r))
    if not dagger:
        weights.extend((1, 2))
    return free_algebra_hilbert(weights, order)


def rank_identity_check(
    r: int, ell: int, order: int, dagger: bool
) -> tuple[bool, dict]:
    """Check that the strata account for every rank of the ambient ring:
    sum over types e of t^u(e) * stratum series == ambient series, up to
    ``order``.  Returns the verdict and a per-degree report."""
    types = enumerate_types(r, ell, order)
    ambient = ambient_hilbert(r, order, dagger)
    total = IntSeries((0,) * (order + 1))
    per_stratum = []
    for t in types:
        u = u_invariant(t)
        contribution = stratum_hilbert(t, order, dagger).shift(u)
        total = total + contribution
        per_stratum.append((t, u, contribution))
    degrees = []
    first_failing = None
    for i in range(order + 1):
        entry = {
            "i": i,
            "ambient": ambient.coeffs[i],
            "strata_sum": total.coeffs[i],
            "per_stratum": [
                {"e": list(t.e), "u": u, "contribution": contrib.coeffs[i]}
                for (t, u, contrib) in per_stratum
            ],
        }
        degrees.append(entry)
        if ambient.coeffs[i] != total.coeffs[i] and first_failing is None:
            first_failing = i
    report = {"r": r, "ell": ell, "order": order, "dagger": dagger,
              "degrees": degrees}
    if first_failing is not None:
        report["first_failing_degree"] = first_failing
    return first_failing is None, report


def complement_codim_check(r: int, ell: int, m: int) -> bool:
    """Check that the locus of types with e_1 < -m has codimension exactly
    ell + m*r + 1: no admissible type does better, and one attains it.

    For rank 1 the locus is empty (the single type per degree has e_1 >= 0)
    and the claim holds vacuously."""
    if m < 0:
        raise DomainError("twist must be >= 0")
    if r == 1:
        return ell >= 0
    expected = ell + m * r + 1
    candidates = [
        t for t in enumerate_types(r, ell, expected) if t.e[0] < -m
    ]
    if not candidates:
        return False
    return min(u_invariant(t) for t in candidates) == expected
