"""Predicted general fibers: group translations between consecutive layers.

For ``g_1, ..., g_{L-1}`` in G the tuple

    (theta_1 * g_1, g_1^-1 * theta_2 * g_2, ..., g_{L-1}^-1 * theta_L)

has the same image as ``theta`` under both parametrizations, as does the
rescaled tuple ``(l_1 theta_1, l_1^-r l_2 theta_2, ..., l_{L-1}^-r theta_L)``.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .filters import Filter, left_translate, right_translate
from .groups import _as_index
from .maps import Architecture, ParameterTuple, Phi_map, evaluate_network, phi_map
from .rings import QQ


def translate_tuple(theta: ParameterTuple, gs: Sequence) -> ParameterTuple:
    L = len(theta)
    if len(gs) != L - 1:
        raise ValueError(f"need {L - 1} group elements for {L} layers, got {len(gs)}")
    G = theta.group
    gs = [_as_index(g) for g in gs]
    out = []
    for l, f in enumerate(theta):
        if l > 0:
            f = left_translate(f, G.inv(gs[l - 1]))
        if l < L - 1:
            f = right_translate(f, gs[l])
        out.append(f)
    return ParameterTuple(tuple(out))


def rescale_tuple(theta: ParameterTuple, lambdas: Sequence, r: int, sign: int = -1) -> ParameterTuple:
    """``(l_1 theta_1, l_1^(sign*r) l_2 theta_2, ..., l_{L-1}^(sign*r) theta_L)``.

    Only ``sign=-1`` preserves phi and Phi; ``sign=+1`` is accepted so the
    opposite convention can be tested against.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    L = len(theta)
    if len(lambdas) != L - 1:
        raise ValueError(f"need {L - 1} scalars for {L} layers, got {len(lambdas)}")
    ring = theta.ring
    lam = [ring(x) for x in lambdas]
    if not all(lam):
        raise ValueError("rescaling factors must be nonzero")
    out = []
    for l, f in enumerate(theta):
        c = ring.one()
        if l > 0:
            prev = ring.inverse(lam[l - 1]) if sign < 0 else lam[l - 1]
            c = c * prev**r
        if l < L - 1:
            c = c * lam[l]
        out.append(f.scale(c))
    return ParameterTuple(tuple(out))


def predicted_fiber(theta: ParameterTuple) -> list[ParameterTuple]:
    """All ``|G|^(L-1)`` translated tuples, ordered by ``(g_1, ..., g_{L-1})``."""
    n = theta.group.order
    return [translate_tuple(theta, gs) for gs in itertools.product(range(n), repeat=len(theta) - 1)]


def proportionality_factor(f: Filter, g: Filter):
    """``c`` with ``g == c * f``, or ``None``.  Zero filters are never proportional."""
    k = next((i for i, a in enumerate(f.coeffs) if a), None)
    if k is None or not g.coeffs[k]:
        return None
    c = g.coeffs[k] * f.ring.inverse(f.coeffs[k])
    if all(b == a * c for a, b in zip(f.coeffs, g.coeffs)):
        return c
    return None


def rescaling_equivalent(psi: ParameterTuple, other: ParameterTuple, r: int) -> bool:
    """True iff ``other == rescale_tuple(psi, lambdas, r)`` for some nonzero lambdas."""
    ring = psi.ring
    lam = ring.one()  # running lambda_{l-1}; the first layer has none
    for l, (a, b) in enumerate(zip(psi, other)):
        c = proportionality_factor(a, b)
        if c is None:
            return False
        if l == len(psi) - 1 and l > 0:
            return c == ring.inverse(lam) ** r
        lam = c if l == 0 else c * lam**r
    return True  # single layer: any nonzero multiple is the same point


def projectively_equal(psi: ParameterTuple, other: ParameterTuple) -> bool:
    """Layerwise proportional with independent nonzero factors."""
    return all(proportionality_factor(a, b) is not None for a, b in zip(psi, other))


def count_distinct(tuples: Sequence[ParameterTuple], r: int) -> int:
    reps: list[ParameterTuple] = []
    for t in tuples:
        if not any(rescaling_equivalent(rep, t, r) for rep in reps):
            reps.append(t)
    return len(reps)


@dataclass
class FiberReport:
    architecture: str
    group: str
    n: int
    layers: int
    degree: int
    seed: int
    trial: int
    which: str
    predicted_size: int
    phi_matches: int | None
    Phi_matches: int | None
    distinct_orbits: int
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        counts = [c for c in (self.phi_matches, self.Phi_matches) if c is not None]
        return all(c == self.predicted_size for c in counts) and self.distinct_orbits == self.predicted_size

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def verify_fiber(
    arch: Architecture, theta: ParameterTuple, which: str = "both", *, seed: int = 0, trial: int = 0
) -> FiberReport:
    if which not in ("phi", "Phi", "both"):
        raise ValueError(f"which must be 'phi', 'Phi' or 'both', got {which!r}")
    fiber = predicted_fiber(theta)
    phi_matches = Phi_matches = None
    if which in ("phi", "both"):
        target = phi_map(arch, theta)
        phi_matches = sum(phi_map(arch, psi) == target for psi in fiber)
    if which in ("Phi", "both"):
        target = Phi_map(arch, theta)
        Phi_matches = sum(Phi_map(arch, psi) == target for psi in fiber)
    distinct = count_distinct(fiber, arch.degree)
    report = FiberReport(
        architecture=arch.describe(), group=arch.group.spec, n=arch.n, layers=arch.layers,
        degree=arch.degree, seed=seed, trial=trial, which=which, predicted_size=len(fiber),
        phi_matches=phi_matches, Phi_matches=Phi_matches, distinct_orbits=distinct,
    )
    if distinct < len(fiber):
        report.notes.append("degenerate point: some translated tuples coincide up to rescaling")
    return report


@dataclass
class ProbeReport:
    architecture: str
    seed: int
    samples: int
    proportional: int
    predicted: int
    unpredicted: int
    injected: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def _collinear(u: Sequence, v: Sequence) -> bool:
    """True iff the nonzero vectors ``u`` and ``v`` span a line."""
    if not any(u) or not any(v):
        return False
    k = next(i for i, a in enumerate(u) if a)
    return all(a * v[k] == b * u[k] for a, b in zip(u, v))


def random_collision_probe(
    arch: Architecture,
    theta: ParameterTuple,
    samples: int,
    rng: np.random.Generator,
    *,
    inject: Sequence[ParameterTuple] = (),
    probe_points: int = 3,
    seed: int = 0,
) -> ProbeReport:
    """Look for random ``psi`` with ``Phi_psi(e)`` proportional to ``Phi_theta(e)``.

    Candidates are screened by forward evaluation at ``probe_points`` fixed
    random inputs (a necessary condition) and confirmed on the exact
    polynomials.  Confirmed collisions are classified as predicted when
    ``psi`` is layerwise proportional to a member of ``predicted_fiber``.
    """
    ring = theta.ring
    xs = [[ring.random(rng) for _ in range(arch.n)] for _ in range(probe_points)]

    def signature(t: ParameterTuple) -> list:
        return [evaluate_network(arch, t, x)[0] for x in xs]

    target_sig = signature(theta)
    target_poly = Phi_map(arch, theta)[0]
    fiber = predicted_fiber(theta)
    proportional = predicted = 0

    candidates = [
        ParameterTuple(tuple(Filter.random(arch.group, ring, rng) for _ in range(arch.layers)))
        for _ in range(samples)
    ]
    candidates.extend(inject)
    for psi in candidates:
        if not _collinear(target_sig, signature(psi)):
            continue
        p = Phi_map(arch, psi)[0]
        basis = sorted(set(p.terms) | set(target_poly.terms))
        if not _collinear(target_poly.coefficients(basis), p.coefficients(basis)):
            continue
        proportional += 1
        if any(projectively_equal(f, psi) for f in fiber):
            predicted += 1
    return ProbeReport(
        architecture=arch.describe(), seed=seed, samples=len(candidates),
        proportional=proportional, predicted=predicted,
        unpredicted=proportional - predicted, injected=len(inject),
    )
