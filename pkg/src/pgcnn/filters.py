"""Filters in the group algebra K[G] and the operations on them.

A filter is a function ``G -> K`` stored as a coefficient tuple in group
index order.  Convolution is ``(a * b)(g) = sum_h a(g h^-1) b(h)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import RingMismatch
from .groups import (
    FiniteGroup,
    _as_index,
    diagonal_indices,
    direct_product,
    parse_group,
    power_group,
)
from .linalg import ExactMatrix, mat_det, mat_solve
from .rings import QQ, RingSpec, parse_ring


@dataclass(frozen=True)
class Filter:
    group: FiniteGroup
    coeffs: tuple
    ring: RingSpec = QQ

    def __post_init__(self):
        if len(self.coeffs) != self.group.order:
            raise ValueError(
                f"filter on {self.group.label} needs {self.group.order} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def of(cls, group: FiniteGroup, values: Sequence, ring: RingSpec = QQ) -> Filter:
        """Build a filter, coercing ``values`` into ``ring``."""
        return cls(group, tuple(ring(v) for v in values), ring)

    @classmethod
    def zero(cls, group: FiniteGroup, ring: RingSpec = QQ) -> Filter:
        return cls(group, (ring.zero(),) * group.order, ring)

    @classmethod
    def delta(cls, group: FiniteGroup, g=0, ring: RingSpec = QQ) -> Filter:
        """The group element ``g`` viewed as a filter (1 at g, 0 elsewhere)."""
        g = _as_index(g)
        zero, one = ring.zero(), ring.one()
        return cls(group, tuple(one if i == g else zero for i in range(group.order)), ring)

    @classmethod
    def identity(cls, group: FiniteGroup, ring: RingSpec = QQ) -> Filter:
        return cls.delta(group, 0, ring)

    @classmethod
    def random(cls, group: FiniteGroup, ring: RingSpec, rng: np.random.Generator) -> Filter:
        return cls(group, tuple(ring.random(rng) for _ in range(group.order)), ring)

    def __getitem__(self, g):
        return self.coeffs[_as_index(g)]

    def __len__(self):
        return len(self.coeffs)

    def _check(self, other: Filter) -> None:
        if self.group != other.group:
            raise RingMismatch(f"filters on {self.group.label} and {other.group.label}")
        if self.ring != other.ring:
            raise RingMismatch(f"filters over {self.ring} and {other.ring}")

    def __add__(self, other: Filter) -> Filter:
        self._check(other)
        return Filter(self.group, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.ring)

    def __sub__(self, other: Filter) -> Filter:
        self._check(other)
        return Filter(self.group, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.ring)

    def __neg__(self) -> Filter:
        return Filter(self.group, tuple(-a for a in self.coeffs), self.ring)

    def scale(self, c) -> Filter:
        c = self.ring(c)
        return Filter(self.group, tuple(a * c for a in self.coeffs), self.ring)

    def __rmul__(self, c) -> Filter:
        return self.scale(c)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        return f"{self.group.spec}[{', '.join(self.ring.format(c) for c in self.coeffs)}]"

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def to_ring(self, ring: RingSpec) -> Filter:
        return Filter(self.group, tuple(ring(c) for c in self.coeffs), ring)

    # -- serialization -------------------------------------------------------
    def to_record(self) -> dict:
        return {
            "group": self.group.spec,
            "ring": self.ring.descriptor,
            "coeffs": [self.ring.format(c) for c in self.coeffs],
        }

    @classmethod
    def from_record(cls, record: dict) -> Filter:
        ring = parse_ring(record["ring"])
        group = parse_group(record["group"])
        return cls(group, tuple(ring.parse(s) for s in record["coeffs"]), ring)

    def dumps(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> Filter:
        return cls.from_record(json.loads(text))


def _objarray(values) -> np.ndarray:
    out = np.empty(len(values), dtype=object)
    out[:] = list(values)
    return out


def convolve(theta: Filter, psi: Filter) -> Filter:
    """``(theta * psi)(g) = sum_h theta(g h^-1) psi(h)``; iterates over the sparser side."""
    theta._check(psi)
    G = theta.group
    supp_t, supp_p = theta.support(), psi.support()
    acc = _objarray([theta.ring.zero()] * G.order)
    if len(supp_p) <= len(supp_t):
        th = _objarray(theta.coeffs)
        for h in supp_p:
            acc += th[G.right_mul_perm(G.inv(h))] * psi.coeffs[h]
    else:
        ps = _objarray(psi.coeffs)
        for k in supp_t:
            # h = k^-1 g
            acc += ps[G.left_mul_perm(G.inv(k))] * theta.coeffs[k]
    return Filter(G, tuple(acc), theta.ring)


def cross_correlate(theta: Filter, psi: Filter) -> Filter:
    """``theta (star) psi := theta * involution(psi)``, i.e. ``sum_h theta(g h) psi(h)``."""
    return convolve(theta, involution(psi))


def circulant_matrix(theta: Filter) -> ExactMatrix:
    """``Mat[i][j] = theta(g_i g_j^-1)``; the matrix of left convolution by theta."""
    G = theta.group
    idx = G.elements
    table = G.mul_array(idx[:, None], G.inverse[None, :])
    c = theta.coeffs
    return ExactMatrix._raw(tuple(tuple(c[k] for k in row) for row in table.tolist()), theta.ring, G.order)


def kron(theta: Filter, psi: Filter, budget: int | None = None) -> Filter:
    """``(theta (x) psi)(g, h) = theta(g) psi(h)`` on ``G x H``, row-major.

    When both factors live on powers of the same base group the result is
    placed on the corresponding larger power of that base.
    """
    if theta.ring != psi.ring:
        raise RingMismatch(f"filters over {theta.ring} and {psi.ring}")
    (B1, a), (B2, b) = theta.group.power_of, psi.group.power_of
    if B1 == B2:
        group = power_group(B1, a + b, budget)
    else:
        group = direct_product(theta.group, psi.group)
    coeffs = tuple(x * y for x in theta.coeffs for y in psi.coeffs)
    return Filter(group, coeffs, theta.ring)


def kron_power(theta: Filter, r: int, budget: int | None = None) -> Filter:
    if r < 1:
        raise ValueError(f"Kronecker power needs r >= 1, got {r}")
    base, a = theta.group.power_of
    power_group(base, a * r, budget)  # fail fast on the budget
    out = theta
    for _ in range(r - 1):
        out = kron(out, theta, budget)
    return out


def hadamard(theta: Filter, psi: Filter) -> Filter:
    theta._check(psi)
    return Filter(theta.group, tuple(a * b for a, b in zip(theta.coeffs, psi.coeffs)), theta.ring)


def hadamard_power(theta: Filter, r: int) -> Filter:
    """``sigma_r``: entrywise r-th power."""
    if r < 1:
        raise ValueError(f"Hadamard power needs r >= 1, got {r}")
    return Filter(theta.group, tuple(a**r for a in theta.coeffs), theta.ring)


def extend_diagonal(psi: Filter, m: int, budget: int | None = None) -> Filter:
    """Extend ``psi`` from G to ``G^m`` along the diagonal, zero off it."""
    G = psi.group
    big = power_group(G, m, budget)
    if m == 1:
        return psi
    coeffs = [psi.ring.zero()] * big.order
    for g, k in enumerate(diagonal_indices(G, m).tolist()):
        coeffs[k] = psi.coeffs[g]
    return Filter(big, tuple(coeffs), psi.ring)


def restrict_diagonal(Theta: Filter, base: FiniteGroup | None = None) -> Filter:
    """``theta(g) = Theta(g, ..., g)``.

    ``base`` defaults to the group ``Theta`` was built as a power of.
    """
    if base is None:
        base, m = Theta.group.power_of
    else:
        m, rem = divmod(len(Theta.group._atoms), len(base._atoms))
        if rem or m == 0 or Theta.group != power_group(base, m, budget=Theta.group.order):
            raise ValueError(f"{Theta.group.label} is not a power of {base.label}")
    return Filter(base, tuple(Theta.coeffs[k] for k in diagonal_indices(base, m).tolist()), Theta.ring)


def involution(theta: Filter) -> Filter:
    """``theta_bar(g) = theta(g^-1)``."""
    inv = theta.group.inverse
    return Filter(theta.group, tuple(theta.coeffs[k] for k in inv.tolist()), theta.ring)


def left_translate(theta: Filter, g) -> Filter:
    """``g * theta`` with g read as a delta filter: ``(g*theta)(k) = theta(g^-1 k)``."""
    G = theta.group
    perm = G.left_mul_perm(G.inv(_as_index(g)))
    return Filter(G, tuple(theta.coeffs[k] for k in perm.tolist()), theta.ring)


def right_translate(theta: Filter, g) -> Filter:
    """``theta * g``: ``(theta*g)(k) = theta(k g^-1)``."""
    G = theta.group
    perm = G.right_mul_perm(G.inv(_as_index(g)))
    return Filter(G, tuple(theta.coeffs[k] for k in perm.tolist()), theta.ring)


def filter_det(theta: Filter):
    return mat_det(circulant_matrix(theta))


def filter_inverse(theta: Filter) -> Filter | None:
    """Convolution inverse, or ``None`` when ``det(theta) == 0``."""
    e = Filter.identity(theta.group, theta.ring)
    v = mat_solve(circulant_matrix(theta), e.coeffs)
    if v is None:
        return None
    return Filter(theta.group, v, theta.ring)


@dataclass
class DetFormulaReport:
    group: str
    n: int
    r: int
    det_theta: object
    det_kron: object
    det_ext: object
    kron_exponent: int | None
    ext_exponent: int | None
    stated_kron_exponent: int
    derived_kron_exponent: int
    stated_ext_exponent: int
    indeterminate: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def ext_matches(self) -> bool:
        return self.det_ext == self.det_theta**self.stated_ext_exponent

    @property
    def kron_matches_derived(self) -> bool:
        return self.det_kron == self.det_theta**self.derived_kron_exponent

    @property
    def kron_matches_stated(self) -> bool:
        return self.det_kron == self.det_theta**self.stated_kron_exponent


def _measure_exponent(base, value, limit: int) -> int | None:
    acc = base**0
    for e in range(limit + 1):
        if acc == value:
            return e
        acc = acc * base
    return None


def verify_det_formulae(theta: Filter, r: int, budget: int | None = None) -> DetFormulaReport:
    """Compare ``det(theta^{(x)r})`` and ``det(theta^{G^r})`` against powers of ``det(theta)``.

    Exponents are measured (smallest e with ``det(theta)^e`` equal to the
    value), not assumed.  Measurement is skipped when ``det(theta)`` is 0 or
    a root of unity of the ring (+-1 over QQ), since any exponent fits.
    """
    n = theta.group.order
    d = filter_det(theta)
    dk = filter_det(kron_power(theta, r, budget))
    de = filter_det(extend_diagonal(theta, r, budget))
    stated_kron = r * n**r
    derived_kron = r * n ** (r - 1)
    stated_ext = n ** (r - 1)
    indeterminate = (not d) or (theta.ring.kind == "QQ" and abs(d) == 1)
    limit = 2 * max(stated_kron, derived_kron, stated_ext)
    if indeterminate:
        ke = ee = None
    else:
        ke = _measure_exponent(d, dk, limit)
        ee = _measure_exponent(d, de, limit)
    notes = []
    if theta.ring.kind == "GF" and not indeterminate:
        notes.append("over GF(p) the measured exponent is the smallest consistent one")
    return DetFormulaReport(
        group=theta.group.label, n=n, r=r,
        det_theta=d, det_kron=dk, det_ext=de,
        kron_exponent=ke, ext_exponent=ee,
        stated_kron_exponent=stated_kron, derived_kron_exponent=derived_kron,
        stated_ext_exponent=stated_ext, indeterminate=indeterminate, notes=notes,
    )
