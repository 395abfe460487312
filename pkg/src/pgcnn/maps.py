"""The two PGCNN parametrizations and the linear map between them.

For filters ``theta = (theta_1, ..., theta_L)`` on G and activation degree r:

- ``phi_map`` gives the Kronecker form, a filter on ``G^(r^(L-1))`` built by
  ``phi(theta_1..theta_k) = phi(theta_1..theta_{k-1})^{(x)r} * ext(theta_k)``;
- ``Phi_map`` gives the polynomial network
  ``sigma_r(...sigma_r(x * theta_1) * theta_2 ...) * theta_L``;
- ``lambda_map`` sends a filter on ``G^m`` to ``(x^{(x)m} * Theta)(e)``.

``Phi_map(theta)(e) == lambda_map(phi_map(theta))`` holds identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import config
from .errors import BudgetExceeded, RingMismatch
from .filters import Filter, convolve, extend_diagonal, filter_det, hadamard_power, kron_power
from .groups import FiniteGroup, power_group
from .linalg import ExactMatrix
from .poly import (
    Poly,
    PolyFilter,
    monomial_count,
    monomials,
    polyfilter_convolve,
    polyfilter_hadamard_power,
)
from .rings import RingSpec


@dataclass(frozen=True)
class Architecture:
    group: FiniteGroup
    layers: int
    degree: int
    max_group_order: int | None = None
    max_monomials: int | None = None

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError(f"need at least one layer, got {self.layers}")
        if self.degree < 1:
            raise ValueError(f"activation degree must be >= 1, got {self.degree}")

    @property
    def n(self) -> int:
        return self.group.order

    @property
    def output_degree(self) -> int:
        """Degree ``r^(L-1)`` of the network polynomials."""
        return self.degree ** (self.layers - 1)

    @property
    def num_params(self) -> int:
        return self.n * self.layers

    @property
    def predicted_rank(self) -> int:
        """Neuromanifold dimension: ``L(n-1)+1`` for r >= 2, ``n`` in the linear case."""
        if self.degree == 1 and self.layers > 1:
            return self.n
        return self.layers * (self.n - 1) + 1

    @property
    def multidegree(self) -> tuple[int, ...]:
        r, L = self.degree, self.layers
        return tuple(r ** (L - l) for l in range(1, L + 1))

    def kronecker_group(self) -> FiniteGroup:
        return power_group(self.group, self.output_degree, self.max_group_order)

    def check_phi_budget(self) -> None:
        limit = config.max_group_order(self.max_group_order)
        size = self.n**self.output_degree
        if size > limit:
            raise BudgetExceeded(f"phi lives on a group of order {size} (budget {limit})")

    def check_Phi_budget(self) -> None:
        limit = config.max_monomials(self.max_monomials)
        count = monomial_count(self.n, self.output_degree)
        if count > limit:
            raise BudgetExceeded(f"Phi has {count} monomials (budget {limit})")

    def describe(self) -> str:
        return f"{self.group.spec} L={self.layers} r={self.degree}"


@dataclass(frozen=True)
class ParameterTuple:
    filters: tuple

    def __post_init__(self):
        if not self.filters:
            raise ValueError("empty parameter tuple")
        first = self.filters[0]
        for f in self.filters[1:]:
            if f.group != first.group or f.ring != first.ring:
                raise RingMismatch("all layer filters must share group and ring")

    @classmethod
    def of(cls, filters: Sequence[Filter]) -> ParameterTuple:
        return cls(tuple(filters))

    def __len__(self):
        return len(self.filters)

    def __str__(self) -> str:
        return "(" + ", ".join(str(f) for f in self.filters) + ")"

    def __getitem__(self, l: int) -> Filter:
        return self.filters[l]

    def __iter__(self) -> Iterator[Filter]:
        return iter(self.filters)

    @property
    def group(self) -> FiniteGroup:
        return self.filters[0].group

    @property
    def ring(self) -> RingSpec:
        return self.filters[0].ring

    def to_vector(self) -> tuple:
        """Flatten layer-major: entry ``l*n + g`` is ``theta_{l+1}(g)``."""
        return tuple(c for f in self.filters for c in f.coeffs)

    @classmethod
    def from_vector(cls, group: FiniteGroup, vec: Sequence, ring: RingSpec) -> ParameterTuple:
        n = group.order
        if len(vec) % n:
            raise ValueError(f"vector length {len(vec)} is not a multiple of {n}")
        return cls(tuple(Filter(group, tuple(vec[i:i + n]), ring) for i in range(0, len(vec), n)))

    def to_ring(self, ring: RingSpec) -> ParameterTuple:
        return ParameterTuple(tuple(f.to_ring(ring) for f in self.filters))

    def to_records(self) -> list[dict]:
        return [f.to_record() for f in self.filters]


def sample_parameters(
    arch: Architecture, ring: RingSpec, rng: np.random.Generator, max_retries: int = 10
) -> ParameterTuple:
    """Random filters, resampled (up to ``max_retries`` times) until every layer is invertible."""
    for _ in range(max_retries):
        theta = ParameterTuple(tuple(Filter.random(arch.group, ring, rng) for _ in range(arch.layers)))
        if all(filter_det(f) for f in theta):
            return theta
    return theta


def _check_arch(arch: Architecture, theta: ParameterTuple) -> None:
    if len(theta) != arch.layers:
        raise ValueError(f"architecture has {arch.layers} layers, got {len(theta)} filters")
    if theta.group != arch.group:
        raise RingMismatch(f"filters on {theta.group.label}, architecture on {arch.group.label}")


def phi_map(arch: Architecture, theta: ParameterTuple) -> Filter:
    """Kronecker-form parametrization, a filter on ``G^(r^(L-1))``."""
    _check_arch(arch, theta)
    arch.check_phi_budget()
    r, budget = arch.degree, arch.max_group_order
    out = theta[0]
    for k in range(1, arch.layers):
        lifted = kron_power(out, r, budget) if r > 1 else out
        out = convolve(lifted, extend_diagonal(theta[k], r**k, budget))
    return out


def Phi_map(arch: Architecture, theta: ParameterTuple) -> PolyFilter:
    """Polynomial-form parametrization: the network as a filter of polynomials in x."""
    _check_arch(arch, theta)
    arch.check_Phi_budget()
    P = polyfilter_convolve(PolyFilter.variables(arch.group, theta.ring), theta[0])
    for k in range(1, arch.layers):
        P = polyfilter_convolve(polyfilter_hadamard_power(P, arch.degree), theta[k])
    return P


def lambda_map(arch: Architecture, Theta: Filter) -> Poly:
    """``(x^{(x)m} * Theta)(e) = sum_h x_{h_1}...x_{h_m} Theta(h^-1)``, with ``m = r^(L-1)``."""
    m = arch.output_degree
    G = arch.group
    big = power_group(G, m, arch.max_group_order)
    if Theta.group != big:
        raise RingMismatch(f"expected a filter on {big.label}, got {Theta.group.label}")
    n = G.order
    inv = big.inverse
    terms: dict = {}
    for k in Theta.support():
        exps = [0] * n
        for digit in _base_digits(int(inv[k]), n, m):
            exps[digit] += 1
        mono = tuple(exps)
        s = terms.get(mono)
        terms[mono] = Theta.coeffs[k] if s is None else s + Theta.coeffs[k]
    return Poly(terms, n, Theta.ring)


def _base_digits(k: int, n: int, m: int) -> list[int]:
    out = [0] * m
    for t in range(m - 1, -1, -1):
        k, out[t] = divmod(k, n)
    return out


def lambda_matrix(arch: Architecture, ring: RingSpec) -> ExactMatrix:
    """Matrix of ``lambda_map``: rows are graded-lex monomials, columns elements of ``G^m``."""
    m = arch.output_degree
    n = arch.n
    big = power_group(arch.group, m, arch.max_group_order)
    basis = monomials(n, m, arch.max_monomials)
    row_of = {mono: i for i, mono in enumerate(basis)}
    zero, one = ring.zero(), ring.one()
    rows = [[zero] * big.order for _ in basis]
    inv = big.inverse.tolist()
    for k in range(big.order):
        exps = [0] * n
        for digit in _base_digits(inv[k], n, m):
            exps[digit] += 1
        rows[row_of[tuple(exps)]][k] = one
    return ExactMatrix._raw(tuple(tuple(r) for r in rows), ring, big.order)


def check_commute(arch: Architecture, theta: ParameterTuple) -> bool:
    """True iff ``lambda_map(phi_map(theta)) == Phi_map(theta)(e)`` exactly."""
    return lambda_map(arch, phi_map(arch, theta)) == Phi_map(arch, theta)[0]


def evaluate_network(arch: Architecture, theta: ParameterTuple, x: Sequence) -> Filter:
    """Numeric forward pass: alternate convolution and entrywise r-th power."""
    _check_arch(arch, theta)
    if len(x) != arch.n:
        raise ValueError(f"input has {len(x)} entries, group has {arch.n} elements")
    y = convolve(Filter.of(arch.group, x, theta.ring), theta[0])
    for k in range(1, arch.layers):
        y = convolve(hadamard_power(y, arch.degree), theta[k])
    return y
