"""Randomized checks of the group-algebra identities the parametrizations rely on.

Every identity is an exact equality, so a single failure is a bug.  The one
exception is generality of invertibility, which only has to hold for almost
all filters and is judged by a pass-rate threshold.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .filters import (
    Filter,
    circulant_matrix,
    convolve,
    cross_correlate,
    filter_det,
    filter_inverse,
    hadamard,
    hadamard_power,
    involution,
    kron,
    kron_power,
    restrict_diagonal,
    verify_det_formulae,
)
from .groups import FiniteGroup
from .linalg import ExactMatrix
from .rings import QQ, RingSpec

GENERALITY_THRESHOLD = 0.99


@dataclass
class IdentityResult:
    name: str
    trials: int
    holds: int
    threshold: float = 1.0
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.holds >= self.threshold * self.trials

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


@dataclass
class IdentitySuiteReport:
    group: str
    n: int
    r: int
    seed: int
    trials: int
    results: list[IdentityResult]
    kron_exponents: dict = field(default_factory=dict)
    ext_exponents: dict = field(default_factory=dict)
    stated_kron_exponent: int = 0
    derived_kron_exponent: int = 0
    stated_ext_exponent: int = 0

    @property
    def passed(self) -> bool:
        return all(res.passed for res in self.results)

    def result(self, name: str) -> IdentityResult:
        return next(res for res in self.results if res.name == name)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["results"] = [res.to_dict() for res in self.results]
        d["passed"] = self.passed
        return d


# individual identities; each takes fresh random filters and returns a bool

def associativity(a: Filter, b: Filter, c: Filter) -> bool:
    return convolve(convolve(a, b), c) == convolve(a, convolve(b, c))


def mat_homomorphism(a: Filter, b: Filter) -> bool:
    return circulant_matrix(convolve(a, b)) == circulant_matrix(a) @ circulant_matrix(b)


def mat_additivity(a: Filter, b: Filter) -> bool:
    return circulant_matrix(a + b) == circulant_matrix(a) + circulant_matrix(b)


def kron_distributes(t1: Filter, p1: Filter, t2: Filter, p2: Filter) -> bool:
    """``(t1 (x) p1) * (t2 (x) p2) == (t1 * t2) (x) (p1 * p2)``; t's on G, p's on H."""
    return convolve(kron(t1, p1), kron(t2, p2)) == kron(convolve(t1, t2), convolve(p1, p2))


def hadamard_restriction(t1: Filter, p1: Filter, t2: Filter, p2: Filter) -> bool:
    """``(t1 * p1) . (t2 * p2) == ((t1 (x) t2) * (p1 (x) p2))|_diag``, all on G."""
    lhs = hadamard(convolve(t1, p1), convolve(t2, p2))
    return lhs == restrict_diagonal(convolve(kron(t1, t2), kron(p1, p2)))


def activation_restriction(t: Filter, p: Filter, r: int) -> bool:
    """``sigma_r(t * p) == (t^{(x)r} * p^{(x)r})|_diag``."""
    return hadamard_power(convolve(t, p), r) == restrict_diagonal(convolve(kron_power(t, r), kron_power(p, r)))


def circulant_inverse(a: Filter) -> bool | None:
    """Mat of the convolution inverse inverts Mat; ``None`` if ``a`` is singular."""
    inv = filter_inverse(a)
    if inv is None:
        return None
    n = a.group.order
    I = ExactMatrix.identity(n, a.ring)
    M, Minv = circulant_matrix(a), circulant_matrix(inv)
    return (
        convolve(a, inv) == Filter.identity(a.group, a.ring)
        and M @ Minv == I
        and Minv @ M == I
    )


def cross_correlation(x: Filter, t: Filter) -> bool:
    """``x (star) t`` is ``sum_h x(g h) t(h)``, and convolving equals correlating with the involution."""
    G = x.group
    zero = x.ring.zero()
    direct = []
    for g in range(G.order):
        acc = zero
        for h in range(G.order):
            acc = acc + x.coeffs[G.mul(g, h)] * t.coeffs[h]
        direct.append(acc)
    return (
        cross_correlate(x, t).coeffs == tuple(direct)
        and convolve(x, t) == cross_correlate(x, involution(t))
    )


def run_identity_suite(
    group: FiniteGroup,
    trials: int = 100,
    seed: int = 0,
    r: int = 2,
    ring: RingSpec = QQ,
    partner: FiniteGroup | None = None,
    budget: int | None = None,
) -> IdentitySuiteReport:
    """Run every identity ``trials`` times on fresh random filters.

    ``partner`` is the second factor H used for the Kronecker distributivity
    check; it defaults to ``group`` itself.
    """
    rng = np.random.default_rng([seed, group.order])
    H = partner if partner is not None else group
    n = group.order

    def rand(G: FiniteGroup = group) -> Filter:
        return Filter.random(G, ring, rng)

    tallies: Counter = Counter()
    attempted: Counter = Counter()
    kron_exps: Counter = Counter()
    ext_exps: Counter = Counter()
    notes: dict[str, list[str]] = {}

    def record(name: str, ok: bool | None) -> None:
        if ok is None:
            notes.setdefault(name, []).append("skipped a singular filter")
            return
        attempted[name] += 1
        tallies[name] += bool(ok)

    checks: list[tuple[str, Callable[[], bool | None]]] = [
        ("associativity", lambda: associativity(rand(), rand(), rand())),
        ("mat_homomorphism", lambda: mat_homomorphism(rand(), rand())),
        ("mat_additivity", lambda: mat_additivity(rand(), rand())),
        ("kron_distributes", lambda: kron_distributes(rand(), rand(H), rand(), rand(H))),
        ("hadamard_restriction", lambda: hadamard_restriction(rand(), rand(), rand(), rand())),
        ("activation_restriction", lambda: activation_restriction(rand(), rand(), r)),
        ("circulant_inverse", lambda: circulant_inverse(rand())),
        ("cross_correlation", lambda: cross_correlation(rand(), rand())),
    ]
    for _ in range(trials):
        for name, check in checks:
            record(name, check())

        theta = rand()
        det = verify_det_formulae(theta, r, budget)
        if det.indeterminate:
            notes.setdefault("det_extension", []).append("indeterminate exponent (det 0 or +-1)")
        else:
            kron_exps[det.kron_exponent] += 1
            ext_exps[det.ext_exponent] += 1
        record("det_extension", det.ext_matches)
        record("det_kron_derived", det.kron_matches_derived)

        general = all(
            filter_det(f)
            for f in (theta, hadamard_power(theta, r))
        ) and bool(det.det_kron) and bool(det.det_ext)
        record("generality_of_invertibility", general)

    results = []
    for name in [c[0] for c in checks] + ["det_extension", "det_kron_derived", "generality_of_invertibility"]:
        threshold = GENERALITY_THRESHOLD if name == "generality_of_invertibility" else 1.0
        results.append(IdentityResult(name, attempted[name], tallies[name], threshold, notes.get(name, [])))

    return IdentitySuiteReport(
        group=group.spec, n=n, r=r, seed=seed, trials=trials, results=results,
        kron_exponents={str(k): v for k, v in sorted(kron_exps.items(), key=lambda kv: str(kv[0]))},
        ext_exponents={str(k): v for k, v in sorted(ext_exps.items(), key=lambda kv: str(kv[0]))},
        stated_kron_exponent=r * n**r,
        derived_kron_exponent=r * n ** (r - 1),
        stated_ext_exponent=n ** (r - 1),
    )
