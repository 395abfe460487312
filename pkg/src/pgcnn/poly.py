"""Sparse multivariate polynomials and polynomial-coefficient filters.

Monomials are exponent tuples.  The canonical order is graded
lexicographic: lower total degree first, then lexicographically
*descending* exponent vectors (``x1^2 > x1 x2 > x2^2``).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Iterator, Sequence

from . import config
from .errors import BudgetExceeded, RingMismatch
from .filters import Filter
from .groups import FiniteGroup, _as_index
from .rings import QQ, RingSpec

Monomial = tuple


def monomial_count(nvars: int, degree: int) -> int:
    return comb(nvars + degree - 1, degree)


def _compositions(nvars: int, degree: int) -> Iterator[tuple]:
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _compositions(nvars - 1, degree - first):
            yield (first,) + rest


def monomials(nvars: int, degree: int, budget: int | None = None) -> list[Monomial]:
    """All exponent vectors of the given total degree, in graded-lex order."""
    limit = config.max_monomials(budget)
    count = monomial_count(nvars, degree)
    if count > limit:
        raise BudgetExceeded(f"{count} monomials of degree {degree} in {nvars} variables (budget {limit})")
    return list(_compositions(nvars, degree))


def graded_lex_key(m: Monomial):
    return (sum(m), tuple(-e for e in m))


def multiset_to_exponents(nvars: int, index: Sequence) -> Monomial:
    """Multiset of variable positions ``[g1, g2, ...]`` -> exponent vector."""
    exps = [0] * nvars
    for g in index:
        exps[_as_index(g)] += 1
    return tuple(exps)


class Poly:
    """Sparse polynomial ``{exponent tuple: nonzero coefficient}``."""

    __slots__ = ("terms", "ring", "nvars")

    def __init__(self, terms: dict, nvars: int, ring: RingSpec = QQ):
        self.terms = {m: c for m, c in terms.items() if c}
        self.nvars = nvars
        self.ring = ring

    @classmethod
    def _raw(cls, terms: dict, nvars: int, ring: RingSpec) -> Poly:
        p = cls.__new__(cls)
        p.terms, p.nvars, p.ring = terms, nvars, ring
        return p

    @classmethod
    def zero(cls, nvars: int, ring: RingSpec = QQ) -> Poly:
        return cls._raw({}, nvars, ring)

    @classmethod
    def constant(cls, c, nvars: int, ring: RingSpec = QQ) -> Poly:
        return cls({(0,) * nvars: ring(c)}, nvars, ring)

    @classmethod
    def variable(cls, i: int, nvars: int, ring: RingSpec = QQ) -> Poly:
        m = [0] * nvars
        m[i] = 1
        return cls._raw({tuple(m): ring.one()}, nvars, ring)

    def _check(self, other: Poly) -> None:
        if self.nvars != other.nvars or self.ring != other.ring:
            raise RingMismatch(
                f"polynomials in {self.nvars} vars over {self.ring} and {other.nvars} vars over {other.ring}"
            )

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out, self.nvars, self.ring)

    def __neg__(self) -> Poly:
        return Poly._raw({m: -c for m, c in self.terms.items()}, self.nvars, self.ring)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def scale(self, c) -> Poly:
        if not c:
            return Poly.zero(self.nvars, self.ring)
        return Poly({m: v * c for m, v in self.terms.items()}, self.nvars, self.ring)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            return self.scale(self.ring(other))
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly(out, self.nvars, self.ring)

    def __rmul__(self, other) -> Poly:
        return self.scale(self.ring(other))

    def __pow__(self, e: int) -> Poly:
        if e < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.constant(1, self.nvars, self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=graded_lex_key):
            mono = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(m) if e
            )
            coeff = self.ring.format(self.terms[m])
            parts.append(f"{coeff}*{mono}" if mono else coeff)
        return " + ".join(parts)

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def coefficient(self, m: Monomial):
        return self.terms.get(tuple(m), self.ring.zero())

    def coefficients(self, basis: Sequence[Monomial]) -> tuple:
        zero = self.ring.zero()
        return tuple(self.terms.get(m, zero) for m in basis)

    def __call__(self, point: Sequence):
        return poly_eval(self, point)

    def to_list(self) -> list:
        """``[[exponents], scalar string]`` pairs in graded-lex order."""
        return [
            [list(m), self.ring.format(self.terms[m])]
            for m in sorted(self.terms, key=graded_lex_key)
        ]

    @classmethod
    def from_list(cls, items: list, nvars: int, ring: RingSpec = QQ) -> Poly:
        return cls({tuple(m): ring.parse(c) for m, c in items}, nvars, ring)


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_eval(p: Poly, point: Sequence):
    if len(point) != p.nvars:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    acc = p.ring.zero()
    for m, c in p.terms.items():
        term = c
        for x, e in zip(point, m):
            if e:
                term = term * x**e
        acc = acc + term
    return acc


@dataclass(frozen=True)
class PolyFilter:
    """A filter whose values are homogeneous polynomials in ``x_g``, g in G."""

    group: FiniteGroup
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.group.order:
            raise ValueError("one polynomial per group element required")
        if any(p.nvars != self.group.order for p in self.entries):
            raise ValueError("polynomials must have one variable per group element")
        degrees = {p.degree for p in self.entries if p}
        if len(degrees) > 1 or not all(p.is_homogeneous() for p in self.entries):
            raise ValueError("entries must be homogeneous of a common degree")

    @property
    def ring(self) -> RingSpec:
        return self.entries[0].ring

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.entries)

    @classmethod
    def variables(cls, group: FiniteGroup, ring: RingSpec = QQ) -> PolyFilter:
        """The input signal ``x`` itself: ``x(g) = x_g``."""
        n = group.order
        return cls(group, tuple(Poly.variable(i, n, ring) for i in range(n)))

    def __getitem__(self, g) -> Poly:
        return self.entries[_as_index(g)]

    def evaluate(self, point: Sequence) -> Filter:
        return Filter(self.group, tuple(poly_eval(p, point) for p in self.entries), self.ring)


def polyfilter_convolve(P: PolyFilter, theta: Filter) -> PolyFilter:
    """``(P * theta)(g) = sum_h P(g h^-1) theta(h)``."""
    G = P.group
    if theta.group != G:
        raise RingMismatch(f"polynomial filter on {G.label}, scalar filter on {theta.group.label}")
    if theta.ring != P.ring:
        raise RingMismatch(f"polynomial filter over {P.ring}, scalar filter over {theta.ring}")
    n = G.order
    out = [Poly.zero(n, P.ring) for _ in range(n)]
    for h in theta.support():
        perm = G.right_mul_perm(G.inv(h)).tolist()
        c = theta.coeffs[h]
        for g in range(n):
            out[g] = out[g] + P.entries[perm[g]].scale(c)
    return PolyFilter(G, tuple(out))


def polyfilter_hadamard_power(P: PolyFilter, r: int) -> PolyFilter:
    if r < 1:
        raise ValueError(f"Hadamard power needs r >= 1, got {r}")
    return PolyFilter(P.group, tuple(p**r for p in P.entries))


def poly_coefficient(P: PolyFilter, g, index: Sequence):
    """Coefficient of the monomial ``prod_{h in index} x_h`` in ``P(g)``."""
    if len(index) != P.degree:
        raise ValueError(f"multiset of size {len(index)} for polynomials of degree {P.degree}")
    return P[g].coefficient(multiset_to_exponents(P.group.order, index))


def exponents_to_multiset(m: Monomial) -> list[int]:
    return sorted(Counter({i: e for i, e in enumerate(m) if e}).elements())
