"""Exact Jacobians of the two parametrizations and rank certification.

Each Jacobian column is one forward evaluation over the dual numbers with
``eps`` placed on a single parameter coordinate.  Ranks are certified at
random integer points, reduced modulo several large primes (and optionally
over QQ); a rank equal to the theoretical maximum at one point proves the
generic rank is at least that large.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import config
from .filters import Filter
from .groups import diagonal_indices, power_group
from .linalg import ExactMatrix, mat_kernel, mat_rank
from .maps import (
    Architecture,
    ParameterTuple,
    Phi_map,
    lambda_map,
    phi_map,
    sample_parameters,
)
from .poly import monomials
from .rings import GF, QQ, Dual, ModInt, RingSpec, dual


def _dual_lift(theta: ParameterTuple, l: int, g: int) -> ParameterTuple:
    """Parameters over the dual ring with eps on coordinate ``(l, g)``."""
    D = dual(theta.ring)
    zero, one = theta.ring.zero(), theta.ring.one()
    lifted = []
    for k, f in enumerate(theta):
        coeffs = tuple(Dual(c, one if (k == l and i == g) else zero) for i, c in enumerate(f.coeffs))
        lifted.append(Filter(f.group, coeffs, D))
    return ParameterTuple(tuple(lifted))


def jac_phi(arch: Architecture, theta: ParameterTuple) -> ExactMatrix:
    """``n^(r^(L-1)) x nL`` Jacobian of the Kronecker-form map; column ``l*n+g``."""
    arch.check_phi_budget()
    if theta.ring.kind == "GF" and theta.ring.p < 2**31:
        return _jac_phi_mod_p(arch, theta)
    n = arch.n
    cols = []
    for l in range(arch.layers):
        for g in range(n):
            out = phi_map(arch, _dual_lift(theta, l, g))
            cols.append(tuple(c.b for c in out.coeffs))
    return ExactMatrix.from_columns(cols, theta.ring)


def _jac_phi_mod_p(arch: Architecture, theta: ParameterTuple) -> ExactMatrix:
    """Same columns as the dual-number path, with values and tangents as int64 arrays."""
    p = theta.ring.p
    G, n, r = arch.group, arch.n, arch.degree
    vals = [np.array([int(c) for c in f.coeffs], dtype=np.int64) for f in theta]
    perms = {}
    for k in range(1, arch.layers):
        big = power_group(G, r**k, arch.max_group_order)
        perms[k] = [big.right_mul_perm(big.inv(int(d))) for d in diagonal_indices(G, r**k)]
    cols = []
    for l in range(arch.layers):
        for g in range(n):
            val = vals[0]
            der = np.zeros(n, dtype=np.int64)
            if l == 0:
                der[g] = 1
            for k in range(1, arch.layers):
                acc, dacc = val, der
                for _ in range(r - 1):  # Kronecker power with the product rule
                    acc, dacc = (
                        np.outer(acc, val).ravel() % p,
                        (np.outer(dacc, val) % p + np.outer(acc, der) % p).ravel() % p,
                    )
                val = np.zeros(len(acc), dtype=np.int64)
                der = np.zeros(len(acc), dtype=np.int64)
                for h, perm in enumerate(perms[k]):  # convolve with the diagonal extension
                    c = vals[k][h]
                    val = (val + acc[perm] * c) % p
                    der = (der + dacc[perm] * c) % p
                    if k == l and h == g:
                        der = (der + acc[perm]) % p
            cols.append([ModInt(int(x), p) for x in der])
    return ExactMatrix.from_columns(cols, theta.ring)


def jac_Phi(arch: Architecture, theta: ParameterTuple) -> ExactMatrix:
    """Jacobian of the coefficients of ``Phi_theta(e)`` (graded-lex rows) in the parameters."""
    arch.check_Phi_budget()
    basis = monomials(arch.n, arch.output_degree, arch.max_monomials)
    zero = theta.ring.zero()
    cols = []
    for l in range(arch.layers):
        for g in range(arch.n):
            p = Phi_map(arch, _dual_lift(theta, l, g))[0]
            cols.append(tuple(p.terms[m].b if m in p.terms else zero for m in basis))
    return ExactMatrix.from_columns(cols, theta.ring)


def phi_coefficient_vector(arch: Architecture, theta: ParameterTuple) -> tuple:
    """Graded-lex coefficient vector of ``Phi_theta(e)``."""
    basis = monomials(arch.n, arch.output_degree, arch.max_monomials)
    return Phi_map(arch, theta)[0].coefficients(basis)


def predicted_kernel_basis(theta: ParameterTuple, r: int) -> list[tuple]:
    """``(theta_l, -r theta_{l+1})`` in layers ``l, l+1``, zero elsewhere; ``L-1`` vectors."""
    L = len(theta)
    n = theta.group.order
    zero = theta.ring.zero()
    minus_r = theta.ring(-r)
    basis = []
    for l in range(L - 1):
        v = [zero] * (n * L)
        v[l * n:(l + 1) * n] = theta[l].coeffs
        v[(l + 1) * n:(l + 2) * n] = [c * minus_r for c in theta[l + 1].coeffs]
        basis.append(tuple(v))
    return basis


def kernel_membership(J: ExactMatrix, v: Sequence) -> bool:
    return not any(J.apply(v))


def euler_constant(arch: Architecture) -> int:
    """Sum of the multidegree ``r^(L-1) + ... + r + 1``."""
    return sum(arch.multidegree)


def chain_rule_holds(arch: Architecture, J_phi: ExactMatrix, J_Phi: ExactMatrix) -> bool:
    """``J_Phi == Lambda . J_phi``, applying Lambda column by column."""
    basis = monomials(arch.n, arch.output_degree, arch.max_monomials)
    big = arch.kronecker_group()
    for j in range(J_phi.ncols):
        col = Filter(big, J_phi.column(j), J_phi.ring)
        if lambda_map(arch, col).coefficients(basis) != J_Phi.column(j):
            return False
    return True


@dataclass(frozen=True)
class RingPolicy:
    primes: tuple[int, ...] = ()
    rational: bool = False

    @property
    def rings(self) -> list[RingSpec]:
        out = [GF(p) for p in self.primes]
        if self.rational:
            out.append(QQ)
        return out

    @property
    def label(self) -> str:
        parts = [f"GF({p})" for p in self.primes]
        if self.rational:
            parts.append("QQ")
        return "+".join(parts)


def parse_ring_policy(text: str) -> RingPolicy:
    """``QQ``, ``fp3`` (default primes), ``fp:<p>``, or ``+``-joined combinations."""
    primes: list[int] = []
    rational = False
    for part in text.split("+"):
        part = part.strip()
        if part == "QQ":
            rational = True
        elif part == "fp3":
            primes.extend(config.default_primes())
        elif part.startswith("fp:"):
            primes.append(int(part[3:]))
        else:
            raise ValueError(f"unknown ring policy {part!r}")
    for p in primes:
        if p <= config.MIN_CERT_PRIME:
            raise ValueError(f"certification prime {p} must exceed 2^20")
        GF(p)  # primality check
    return RingPolicy(tuple(dict.fromkeys(primes)), rational)


@dataclass
class JacobianReport:
    architecture: str
    group: str
    n: int
    layers: int
    degree: int
    seed: int
    trial: int
    ring: str
    map: str
    rows: int
    cols: int
    observed_rank: int
    predicted_rank: int
    kernel_dim: int
    predicted_kernel_dim: int
    basis_annihilated: list[bool]
    basis_independent: bool
    euler_identity: bool
    chain_rule: bool | None = None
    rank_agreement: bool = True
    attempt: int = 0
    superseded: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.observed_rank == self.predicted_rank
            and self.kernel_dim == self.predicted_kernel_dim
            and all(self.basis_annihilated)
            and self.basis_independent
            and self.euler_identity
            and self.chain_rule is not False
            and self.rank_agreement
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def certify_point(
    arch: Architecture,
    theta: ParameterTuple,
    rings: Sequence[RingSpec],
    *,
    seed: int = 0,
    trial: int = 0,
    compute_kernel: bool = True,
) -> list[JacobianReport]:
    """Jacobian reports for both maps at one (QQ-valued) parameter point, per ring."""
    reports: list[JacobianReport] = []
    k_euler = euler_constant(arch)
    nL = arch.num_params
    for ring in rings:
        th = theta.to_ring(ring)
        basis = predicted_kernel_basis(th, arch.degree)
        indep = mat_rank(ExactMatrix.from_columns(basis, ring)) == len(basis) if basis else True
        Jp = jac_phi(arch, th)
        JP = jac_Phi(arch, th)
        vec = th.to_vector()
        phi_val = phi_map(arch, th).coeffs
        Phi_val = phi_coefficient_vector(arch, th)
        chain = chain_rule_holds(arch, Jp, JP)
        for tag, J, value in (("phi", Jp, phi_val), ("Phi", JP, Phi_val)):
            rank = mat_rank(J)
            kdim = len(mat_kernel(J)) if compute_kernel else nL - rank
            euler = J.apply(vec) == tuple(c * k_euler for c in value)
            reports.append(JacobianReport(
                architecture=arch.describe(), group=arch.group.spec, n=arch.n,
                layers=arch.layers, degree=arch.degree, seed=seed, trial=trial,
                ring=ring.descriptor, map=tag, rows=J.nrows, cols=J.ncols,
                observed_rank=rank, predicted_rank=arch.predicted_rank,
                kernel_dim=kdim, predicted_kernel_dim=nL - arch.predicted_rank,
                basis_annihilated=[kernel_membership(J, v) for v in basis],
                basis_independent=indep, euler_identity=euler,
                chain_rule=chain if tag == "Phi" else None,
            ))
    for tag in ("phi", "Phi"):
        ranks = {r.observed_rank for r in reports if r.map == tag}
        if len(ranks) > 1:
            for r in reports:
                if r.map == tag:
                    r.rank_agreement = False
                    r.notes.append(f"ranks disagree across rings: {sorted(ranks)}")
    return reports


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def certify_trial(
    arch: Architecture,
    policy: RingPolicy,
    seed: int,
    trial: int,
    retries: int = 2,
    compute_kernel: bool = True,
) -> list[JacobianReport]:
    """One trial of the dimension check, resampled when the point looks special.

    A rank below the prediction at one point is inconclusive (the point may
    lie on the exceptional set), so up to ``retries`` fresh points are tried.
    Earlier attempts stay in the output marked ``superseded``.
    """
    out: list[JacobianReport] = []
    for attempt in range(retries + 1):
        rng = trial_rng(seed, trial) if attempt == 0 else np.random.default_rng([seed, trial, attempt])
        theta = sample_parameters(arch, QQ, rng)
        reports = certify_point(arch, theta, policy.rings, seed=seed, trial=trial,
                                compute_kernel=compute_kernel)
        for rep in reports:
            rep.attempt = attempt
        out.extend(reports)
        if not any(rep.observed_rank < rep.predicted_rank for rep in reports) or attempt == retries:
            break
        for rep in reports:
            rep.superseded = True
            rep.notes.append("rank deficit at this point (inconclusive); resampled")
    return out


def verify_dimension(
    arch: Architecture,
    trials: int = 3,
    policy: RingPolicy | str = "fp3",
    seed: int = 0,
    compute_kernel: bool = True,
    retries: int = 2,
) -> list[JacobianReport]:
    """Certify ``rank J = predicted`` for both maps at ``trials`` random points.

    Points are integer tuples with entries in ``[-1000, 1000] \\ {0}``, resampled
    when a layer filter is singular, and shared by every ring in the policy.
    """
    if isinstance(policy, str):
        policy = parse_ring_policy(policy)
    reports = []
    for t in range(trials):
        reports.extend(certify_trial(arch, policy, seed, t, retries, compute_kernel))
    return reports


def dimension_passed(reports: Sequence[JacobianReport]) -> bool:
    """Aggregate verdict; superseded attempts do not count."""
    live = [rep for rep in reports if not rep.superseded]
    return bool(live) and all(rep.passed for rep in live)
