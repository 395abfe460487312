import numpy as np
import pytest

import pgcnn.identities as ident
from pgcnn.filters import Filter, hadamard
from pgcnn.groups import cyclic, dihedral, parse_group, symmetric
from pgcnn.identities import (
    GENERALITY_THRESHOLD,
    IdentityResult,
    activation_restriction,
    associativity,
    circulant_inverse,
    cross_correlation,
    hadamard_restriction,
    kron_distributes,
    mat_additivity,
    mat_homomorphism,
    run_identity_suite,
)
from pgcnn.rings import GF, QQ

NAMES = [
    "associativity", "mat_homomorphism", "mat_additivity", "kron_distributes",
    "hadamard_restriction", "activation_restriction", "circulant_inverse", "cross_correlation",
    "det_extension", "det_kron_derived", "generality_of_invertibility",
]


def test_individual_identities_on_dihedral_group():
    G = dihedral(4)
    rng = np.random.default_rng(0)
    f = lambda H=G: Filter.random(H, QQ, rng)
    assert associativity(f(), f(), f())
    assert mat_homomorphism(f(), f())
    assert mat_additivity(f(), f())
    assert kron_distributes(f(), f(cyclic(3)), f(), f(cyclic(3)))
    assert hadamard_restriction(f(), f(), f(), f())
    assert activation_restriction(f(), f(), 3)
    assert circulant_inverse(f())
    assert cross_correlation(f(), f())


def test_singular_filter_is_skipped():
    assert circulant_inverse(Filter.of(cyclic(2), [1, 1])) is None
    assert circulant_inverse(Filter.identity(cyclic(3)))


@pytest.mark.parametrize("spec", ["C1", "C2", "C3", "S3"])
def test_suite_passes(spec):
    G = parse_group(spec)
    rep = run_identity_suite(G, trials=10, seed=1)
    assert [res.name for res in rep.results] == NAMES
    assert rep.passed, rep.to_dict()
    assert rep.result("associativity").trials == 10


def test_measured_kron_exponent_is_r_n_to_r_minus_1():
    rep = run_identity_suite(cyclic(3), trials=10, r=2)
    assert rep.kron_exponents == {"6": 10}
    assert rep.ext_exponents == {"3": 10}
    assert rep.derived_kron_exponent == 6 and rep.stated_kron_exponent == 18
    assert rep.stated_ext_exponent == 3
    cubic = run_identity_suite(cyclic(2), trials=5, r=3)
    assert cubic.kron_exponents == {"12": 5}


def test_suite_over_a_prime_with_partner_group():
    rep = run_identity_suite(symmetric(3), trials=5, ring=GF(1048601), partner=cyclic(2))
    assert rep.passed


def test_suite_is_deterministic():
    a = run_identity_suite(cyclic(4), trials=5, seed=3).to_dict()
    b = run_identity_suite(cyclic(4), trials=5, seed=3).to_dict()
    assert a == b and a["passed"]


def test_generality_threshold():
    res = IdentityResult("generality_of_invertibility", 100, 99, GENERALITY_THRESHOLD)
    assert res.passed
    assert not IdentityResult("x", 100, 98, GENERALITY_THRESHOLD).passed
    assert not IdentityResult("x", 100, 99).passed


def test_suite_catches_a_broken_convolution(monkeypatch):
    # pointwise products are not the group-algebra product, so the circulant homomorphism breaks
    monkeypatch.setattr(ident, "convolve", hadamard)
    rep = run_identity_suite(cyclic(3), trials=3)
    assert not rep.result("mat_homomorphism").passed
    assert not rep.passed
