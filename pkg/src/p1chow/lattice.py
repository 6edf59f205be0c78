"""Integer-lattice model of the integral graded pieces inside their rational
counterparts: coordinates against canonical monomial bases, Hermite-normal-form
canonicalization of integer spans of rational vectors, exact membership tests
(also modulo a rational subspace), graded pieces of finitely generated
subrings, and the two headline verdicts — the degree-4 lattice distinguisher
for rank 2 and the 1/q! non-finite-generation witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm
from typing import Iterable, Sequence

from .bundlecalc import capital_F
from .exactalg import (
    DomainError,
    GradedPolynomial,
    RingSpec,
    StructureError,
    VerificationError,
    dagger_ring,
)

Vector = Sequence[Fraction]


@dataclass(frozen=True)
class GradedBasis:
    """All monomials of one weighted degree, in the canonical order."""

    ring: RingSpec
    degree: int
    monomials: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "_index", {m: i for i, m in enumerate(self.monomials)}
        )

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def position(self, expo: tuple[int, ...]) -> int:
        try:
            return self._index[expo]  # type: ignore[attr-defined]
        except KeyError:
            raise StructureError(
                f"monomial {expo!r} is not of degree {self.degree}"
            ) from None


@lru_cache(maxsize=None)
def graded_basis(ring: RingSpec, degree: int) -> GradedBasis:
    """Enumerate the degree-n monomials of a ring, canonically ordered."""
    if degree < 0:
        raise DomainError("degree must be >= 0")
    out: list[tuple[int, ...]] = []

    def walk(i: int, remaining: int, expo: list[int]) -> None:
        if i == ring.nvars:
            if remaining == 0:
                out.append(tuple(expo))
            return
        w = ring.weights[i]
        for e in range(remaining // w + 1):
            walk(i + 1, remaining - e * w, expo + [e])

    walk(0, degree, [])
    out.sort()
    return GradedBasis(ring, degree, tuple(out))


def coordinates(p: GradedPolynomial, basis: GradedBasis) -> tuple[Fraction, ...]:
    """Coordinate vector of a homogeneous polynomial against a graded basis."""
    if p.ring != basis.ring:
        raise StructureError("polynomial lives in the wrong ring")
    coords = [Fraction(0)] * basis.dim
    for expo, c in p.terms.items():
        coords[basis.position(expo)] = c
    return tuple(coords)


def poly_from_coordinates(
    basis: GradedBasis, coords: Sequence[Fraction]
) -> GradedPolynomial:
    return GradedPolynomial.from_terms(
        basis.ring, dict(zip(basis.monomials, coords))
    )


# -- integer row-style Hermite normal form -----------------------------------


def hnf_rows(rows: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """Canonical row HNF of an integer matrix: positive pivots in strictly
    increasing columns, entries above each pivot reduced into [0, pivot)."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    pivot = 0
    for col in range(ncols):
        nz = [k for k in range(pivot, len(work)) if work[k][col]]
        if not nz:
            continue
        while len(nz) > 1:
            nz.sort(key=lambda k: abs(work[k][col]))
            k0 = nz[0]
            for k in nz[1:]:
                q = work[k][col] // work[k0][col]
                if q:
                    work[k] = [a - q * b for a, b in zip(work[k], work[k0])]
            nz = [k for k in nz if work[k][col]]
        k0 = nz[0]
        work[pivot], work[k0] = work[k0], work[pivot]
        if work[pivot][col] < 0:
            work[pivot] = [-a for a in work[pivot]]
        p = work[pivot][col]
        for k in range(pivot):
            q = work[k][col] // p
            if q:
                work[k] = [a - q * b for a, b in zip(work[k], work[pivot])]
        pivot += 1
    return [tuple(r) for r in work[:pivot]]


def _hnf_with_den(
    vectors: Iterable[Vector],
) -> tuple[tuple[tuple[int, ...], ...], int]:
    """Clear one common denominator, then reduce: returns (rows of D*L, D)."""
    vecs = [tuple(Fraction(x) for x in v) for v in vectors]
    den = 1
    for v in vecs:
        for x in v:
            den = lcm(den, x.denominator)
    int_rows = [[int(x * den) for x in v] for v in vecs]
    return tuple(hnf_rows(int_rows)), den


def _pivot_columns(rows: Sequence[Sequence[int]]) -> list[int]:
    return [next(i for i, x in enumerate(row) if x) for row in rows]


def _member_integer(w: Sequence[int], rows: Sequence[Sequence[int]]) -> bool:
    vec = list(w)
    for row in rows:
        c = next(i for i, x in enumerate(row) if x)
        if vec[c] % row[c]:
            return False
        q = vec[c] // row[c]
        if q:
            vec = [a - q * b for a, b in zip(vec, row)]
    return not any(vec)


@dataclass(frozen=True)
class LatticeSpan:
    """Canonical description of the integer span of rational vectors: the
    HNF rows of D*L together with the cleared denominator D."""

    basis: GradedBasis
    rows: tuple[tuple[int, ...], ...]
    den: int

    @property
    def rank(self) -> int:
        return len(self.rows)

    def element_vectors(self) -> list[tuple[Fraction, ...]]:
        """The HNF rows as rational coordinate vectors (a lattice basis)."""
        return [tuple(Fraction(x, self.den) for x in row) for row in self.rows]

    def element_polys(self) -> list[GradedPolynomial]:
        return [
            poly_from_coordinates(self.basis, v) for v in self.element_vectors()
        ]


def span_from_vectors(
    vectors: Iterable[Vector], basis: GradedBasis
) -> LatticeSpan:
    """Canonical HNF representation of the integer span of the vectors."""
    vecs = [tuple(v) for v in vectors]
    for v in vecs:
        if len(v) != basis.dim:
            raise StructureError("vector length does not match the basis")
    rows, den = _hnf_with_den(vecs)
    return LatticeSpan(basis, rows, den)


def member(v: Vector, lat: LatticeSpan) -> bool:
    """Exact decision of v in the integer span."""
    scaled = [Fraction(x) * lat.den for x in v]
    if any(x.denominator != 1 for x in scaled):
        return False
    return _member_integer([int(x) for x in scaled], lat.rows)


def _rational_rref(
    vectors: Iterable[Vector],
) -> tuple[list[list[Fraction]], list[int]]:
    rows = [list(map(Fraction, v)) for v in vectors]
    rows = [r for r in rows if any(r)]
    pivots: list[int] = []
    reduced: list[list[Fraction]] = []
    for row in rows:
        for r, c in zip(reduced, pivots):
            if row[c]:
                f = row[c]
                row = [a - f * b for a, b in zip(row, r)]
        nz = next((i for i, x in enumerate(row) if x), None)
        if nz is None:
            continue
        row = [a / row[nz] for a in row]
        for r in reduced:
            if r[nz]:
                f = r[nz]
                r[:] = [a - f * b for a, b in zip(r, row)]
        reduced.append(row)
        pivots.append(nz)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [reduced[i] for i in order], sorted(pivots)


def member_mod_subspace(
    v: Vector, lat: LatticeSpan, subspace: Iterable[Vector]
) -> bool:
    """Decide v in L + V for a rational subspace V: eliminate the pivot
    coordinates of V, drop them, and test lattice membership in the image."""
    rref, pivots = _rational_rref(subspace)
    if not pivots:
        return member(v, lat)
    keep = [i for i in range(lat.basis.dim) if i not in set(pivots)]
    if not keep:
        return True

    def project(x: Vector) -> tuple[Fraction, ...]:
        vec = list(map(Fraction, x))
        for row, c in zip(rref, pivots):
            if vec[c]:
                f = vec[c]
                vec = [a - f * b for a, b in zip(vec, row)]
        return tuple(vec[i] for i in keep)

    gen_images = [project(g) for g in lat.element_vectors()]
    rows, den = _hnf_with_den(gen_images)
    scaled = [x * den for x in project(v)]
    if any(x.denominator != 1 for x in scaled):
        return False
    return _member_integer([int(x) for x in scaled], rows)


# -- graded pieces of finitely generated subrings ----------------------------


def subring_graded_piece(
    generators: Sequence[tuple[GradedPolynomial, int]],
    n: int,
    basis: GradedBasis | None = None,
) -> LatticeSpan:
    """Integer span of all products of the generators with total degree n.

    Generators come with their degrees and must be homogeneous of positive
    degree; multisets are enumerated by bounded composition search.
    """
    gens = [(p, d) for p, d in generators if not p.is_zero()]
    for p, d in gens:
        if d < 1:
            raise DomainError("generators must have positive degree")
        if not p.is_homogeneous(d):
            raise StructureError("generator is not homogeneous of its degree")
    if basis is None:
        if not gens:
            raise StructureError("cannot infer the ring without generators")
        basis = graded_basis(gens[0][0].ring, n)
    vectors: list[tuple[Fraction, ...]] = []

    def walk(idx: int, remaining: int, acc: GradedPolynomial) -> None:
        if remaining == 0:
            vectors.append(coordinates(acc, basis))
            return
        if idx == len(gens):
            return
        walk(idx + 1, remaining, acc)
        p, d = gens[idx]
        power = acc
        used = d
        while used <= remaining:
            power = power * p
            walk(idx + 1, remaining - used, power)
            used += d

    walk(0, n, GradedPolynomial.one(basis.ring))
    return span_from_vectors(vectors, basis)


def dagger_generators(
    r: int, ell: int, up_to: int
) -> list[tuple[GradedPolynomial, int]]:
    """a_1..a_r plus the series coefficients f_1..f_{up_to}."""
    ring = dagger_ring(r)
    gens: list[tuple[GradedPolynomial, int]] = [
        (GradedPolynomial.variable(ring, f"a{i}"), i) for i in range(1, r + 1)
    ]
    f = capital_F(r, ell, up_to)
    for i in range(1, up_to + 1):
        fi = f.coefficient(i)
        if not fi.is_zero():
            gens.append((fi, i))
    return gens


def dagger_chow_piece(r: int, ell: int, n: int) -> LatticeSpan:
    """Degree-n graded piece of the integral subring generated by a_1..a_r
    and the f_i, inside the rational degree-n piece."""
    if not 0 <= ell:
        raise DomainError("degree must be >= 0")
    basis = graded_basis(dagger_ring(r), n)
    return subring_graded_piece(dagger_generators(r, ell, n), n, basis)


def product_span(
    left: LatticeSpan, right: LatticeSpan, basis: GradedBasis
) -> LatticeSpan:
    """Integer span of all products x*y with x in left and y in right."""
    vectors = []
    for p in left.element_polys():
        for q in right.element_polys():
            vectors.append(coordinates(p * q, basis))
    return span_from_vectors(vectors, basis)


# -- headline applications ---------------------------------------------------


def b2_distinguish() -> dict:
    """Reproduce the degree-4 lattice comparison separating the rank-2
    residue-0 and residue-1 stacks.

    For residue 0, 24*f4 lies in the product lattice A^1 * A^3; for residue 1,
    no adjustment of f4 by the lattice of lower-codimension products makes any
    multiple land in A^1 * A^3.  Raises VerificationError naming the failing
    inclusion; returns the per-residue reports on success.
    """
    ring = dagger_ring(2)
    reports = []
    for ell in (0, 1):
        pieces = {k: dagger_chow_piece(2, ell, k) for k in (1, 2, 3, 4)}
        basis4 = graded_basis(ring, 4)
        f4 = capital_F(2, ell, 4).coefficient(4)
        f4v = coordinates(f4, basis4)
        a1a3 = product_span(pieces[1], pieces[3], basis4)
        a2a2 = product_span(pieces[2], pieces[2], basis4)
        if not member(f4v, pieces[4]):
            raise VerificationError(
                f"sanity: f4 not in the degree-4 lattice (ell={ell})"
            )
        membership_24f4 = member([24 * x for x in f4v], a1a3)
        lower = span_from_vectors(
            a1a3.element_vectors() + a2a2.element_vectors(), basis4
        )
        nonmembership_f4 = not member_mod_subspace(
            f4v, lower, a1a3.element_vectors()
        )
        reports.append(
            {
                "ell": ell,
                "degree": 4,
                "membership_24f4": membership_24f4,
                "nonmembership_f4": nonmembership_f4,
                "lattice_ranks": {str(k): pieces[k].rank for k in pieces},
            }
        )
    if not reports[0]["membership_24f4"]:
        raise VerificationError("24*f4 in A^1*A^3 fails for ell=0")
    if not reports[1]["nonmembership_f4"]:
        raise VerificationError(
            "f4 avoids span(A^1*A^3, A^2*A^2) + Q*(A^1*A^3) fails for ell=1"
        )
    return {"reports": reports}


def nfg_coefficient(q: int, ell: int = 0) -> Fraction:
    """Signed coefficient of (a2p)^q in f_q for rank 2; its absolute value
    must be 1/q!, the denominator witness for non-finite generation."""
    if q < 2:
        raise DomainError("need q >= 2")
    f = capital_F(2, ell, q)
    coeff = f.coefficient(q).coefficient({"a2p": q})
    if abs(coeff) != Fraction(1, factorial(q)):
        raise VerificationError(
            f"coefficient of (a2p)^{q} in f_{q} is {coeff}, expected "
            f"absolute value 1/{q}!"
        )
    return coeff
