from fractions import Fraction
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pgcnn.config import DEFAULT_PRIMES, MIN_CERT_PRIME
from pgcnn.rings import GF, QQ, Dual, ModInt, dual, parse_ring, random_scalar, ring_of

P = DEFAULT_PRIMES[0]
ints = st.integers(-10**6, 10**6)


def test_default_primes_are_the_first_three_above_2_20():
    from sympy import nextprime

    p1 = nextprime(2**20)
    assert DEFAULT_PRIMES == (p1, nextprime(p1), nextprime(nextprime(p1)))
    assert all(p > MIN_CERT_PRIME for p in DEFAULT_PRIMES)


def test_gf_rejects_composite_modulus():
    with pytest.raises(ValueError):
        GF(1048584)


def test_dual_wraps_exactly_one_base():
    with pytest.raises(ValueError):
        dual(dual(QQ))


@given(ints, ints, ints, ints)
def test_dual_product_rule(a, b, c, d):
    z = Dual(Fraction(a), Fraction(b)) * Dual(Fraction(c), Fraction(d))
    assert z.a == a * c
    assert z.b == a * d + b * c


@given(ints, ints)
def test_eps_squared_vanishes(a, b):
    eps = Dual(Fraction(0), Fraction(1))
    assert eps * eps == Dual(Fraction(0), Fraction(0))
    x = Dual(Fraction(a), Fraction(b))
    assert x**3 == x * x * x


@given(ints.filter(bool), ints)
def test_dual_division_inverts_multiplication(a, b):
    x = Dual(Fraction(a), Fraction(b))
    y = Dual(Fraction(3), Fraction(-7))
    assert (x * y) / x == y


@given(ints, ints)
def test_modint_matches_integer_arithmetic(a, b):
    x, y = ModInt(a, P), ModInt(b, P)
    assert int(x + y) == (a + b) % P
    assert int(x - y) == (a - b) % P
    assert int(x * y) == (a * b) % P
    assert 0 <= int(x) < P


@given(ints.filter(lambda v: v % P))
def test_modint_inverse(a):
    x = ModInt(a, P)
    assert x * x.inverse() == 1


def test_modint_rejects_mixed_primes():
    with pytest.raises(ValueError):
        ModInt(1, P) + ModInt(1, DEFAULT_PRIMES[1])


def test_fraction_reduces_into_gf():
    F = GF(P)
    assert F(Fraction(1, 3)) * 3 == 1


@given(st.fractions(max_denominator=10**6))
def test_rationals_in_lowest_terms(q):
    x = QQ(q)
    assert gcd(x.numerator, x.denominator) == 1
    assert x.denominator > 0


def test_random_scalar_is_deterministic():
    a = [random_scalar(QQ, np.random.default_rng(42)) for _ in range(1)]
    rng1, rng2 = np.random.default_rng(42), np.random.default_rng(42)
    seq1 = [random_scalar(QQ, rng1) for _ in range(50)]
    seq2 = [random_scalar(QQ, rng2) for _ in range(50)]
    assert seq1 == seq2
    assert a[0] == seq1[0]


def test_random_scalar_over_gf_never_zero():
    rng = np.random.default_rng(0)
    F = GF(P)
    draws = [random_scalar(F, rng) for _ in range(10_000)]
    assert all(draws)


def test_random_scalar_respects_bound():
    rng = np.random.default_rng(1)
    draws = [random_scalar(QQ, rng, bound=5) for _ in range(2000)]
    assert set(draws) == {Fraction(k) for k in range(-5, 6) if k}


def test_random_dual_scalar_rejected():
    with pytest.raises(TypeError):
        random_scalar(dual(QQ), np.random.default_rng(0))


@pytest.mark.parametrize("ring", [QQ, GF(P), dual(QQ), dual(GF(P))])
def test_descriptor_round_trip(ring):
    assert parse_ring(ring.descriptor) == ring


@given(st.fractions(max_denominator=1000))
def test_scalar_format_round_trip(q):
    for ring in (QQ, GF(P), dual(QQ)):
        x = ring(q)
        assert ring.parse(ring.format(x)) == x


def test_rational_format():
    assert QQ.format(Fraction(-2, 4)) == "-1/2"
    assert QQ.format(Fraction(6, 3)) == "2"


def test_ring_of():
    assert ring_of(Fraction(1)) == QQ
    assert ring_of(ModInt(1, P)) == GF(P)
    assert ring_of(Dual(ModInt(1, P), ModInt(0, P))) == dual(GF(P))
