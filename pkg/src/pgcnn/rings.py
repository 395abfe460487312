"""Exact coefficient rings: rationals, prime fields and dual numbers.

Scalars are ordinary Python objects supporting ``+ - *`` so that the rest of
the package can be written generically:

- rationals are :class:`fractions.Fraction`
- prime-field elements are :class:`ModInt`
- dual numbers ``a + b*eps`` (``eps**2 == 0``) are :class:`Dual`

A :class:`RingSpec` knows how to build, coerce, sample and (de)serialize the
scalars of its ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np

from .config import COEFF_BOUND


class ModInt:
    """An element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModInt):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        if type(other) is ModInt and other.p == self.p:
            return ModInt(self.v + other.v, self.p)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ModInt(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ModInt(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ModInt(o - self.v, self.p)

    def __mul__(self, other):
        if type(other) is ModInt and other.p == self.p:
            return ModInt(self.v * other.v, self.p)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ModInt(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModInt(-self.v, self.p)

    def __pow__(self, e: int):
        return ModInt(pow(self.v, e, self.p), self.p)

    def inverse(self) -> ModInt:
        if self.v == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return ModInt(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * ModInt(o, self.p).inverse()

    def __rtruediv__(self, other):
        return ModInt(self._coerce(other), self.p) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, ModInt):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"


class Dual:
    """Dual number ``a + b*eps`` over an exact base ring, ``eps**2 = 0``."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = a
        self.b = b

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a + other.a, self.b + other.b)
        return Dual(self.a + other, self.b)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a - other.a, self.b - other.b)
        return Dual(self.a - other, self.b)

    def __rsub__(self, other):
        return Dual(other - self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a * other.a, self.a * other.b + self.b * other.a)
        return Dual(self.a * other, self.b * other)

    __rmul__ = __mul__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __pow__(self, e: int):
        if e < 0:
            return (Dual(1, 0) / self) ** (-e)
        if e == 0:
            return Dual(self.a**0, self.b * 0)
        # (a + b eps)^e = a^e + e a^(e-1) b eps
        lead = self.a ** (e - 1)
        return Dual(lead * self.a, e * lead * self.b)

    def __truediv__(self, other):
        if not isinstance(other, Dual):
            other = Dual(other, other * 0)
        if not other.a:
            raise ZeroDivisionError("dual division by a pure infinitesimal")
        inv_a = Fraction(1, other.a) if isinstance(other.a, int) else 1 / other.a
        return Dual(self.a * inv_a, (self.b * other.a - self.a * other.b) * inv_a * inv_a)

    def __eq__(self, other):
        if isinstance(other, Dual):
            return self.a == other.a and self.b == other.b
        return self.a == other and not self.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"Dual({self.a!r}, {self.b!r})"


@lru_cache(maxsize=None)
def _is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class RingSpec:
    """Descriptor of an exact coefficient ring.

    ``kind`` is ``"QQ"``, ``"GF"`` (with prime ``p``) or ``"dual"`` (with
    ``base``).  Use the module level :data:`QQ`, :func:`GF` and :func:`dual`
    rather than calling the constructor directly.
    """

    kind: str
    p: int | None = None
    base: RingSpec | None = None

    def __post_init__(self):
        if self.kind == "GF":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"GF needs a prime modulus, got {self.p}")
        elif self.kind == "dual":
            if self.base is None or self.base.kind == "dual":
                raise ValueError("dual numbers wrap exactly one non-dual ring")
        elif self.kind != "QQ":
            raise ValueError(f"unknown ring kind {self.kind!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "dual"

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def __call__(self, x: Any):
        """Coerce ``x`` (int, Fraction, numeric string or scalar) into this ring."""
        if isinstance(x, str):
            return self.parse(x)
        if self.kind == "QQ":
            if isinstance(x, ModInt | Dual):
                raise TypeError(f"cannot coerce {x!r} into QQ")
            return Fraction(x)
        if self.kind == "GF":
            if isinstance(x, ModInt):
                if x.p != self.p:
                    raise ValueError(f"cannot coerce F_{x.p} into F_{self.p}")
                return x
            if isinstance(x, Fraction):
                return ModInt(x.numerator, self.p) / x.denominator
            if isinstance(x, Dual):
                raise TypeError("cannot coerce a dual number into a field")
            return ModInt(int(x), self.p)
        if isinstance(x, Dual):
            return Dual(self.base(x.a), self.base(x.b))
        return Dual(self.base(x), self.base(0))

    def inverse(self, x):
        if self.kind == "QQ":
            return 1 / x
        if self.kind == "GF":
            return x.inverse()
        return Dual(self.base.one(), self.base.zero()) / x

    def random(self, rng: np.random.Generator, bound: int = COEFF_BOUND):
        """A nonzero random scalar, deterministic given ``rng``.

        Over QQ: uniform integer in [-bound, bound] without 0.
        Over GF(p): uniform in 1..p-1.
        """
        if self.kind == "QQ":
            k = int(rng.integers(1, 2 * bound + 1))
            return Fraction(k - bound - 1 if k <= bound else k - bound)
        if self.kind == "GF":
            return ModInt(int(rng.integers(1, self.p)), self.p)
        raise TypeError("random scalars are only drawn from QQ or GF(p)")

    def reduce(self, x):
        """Map a QQ scalar into this ring (identity for QQ)."""
        return self(x)

    # -- serialization -----------------------------------------------------
    @property
    def descriptor(self) -> str:
        if self.kind == "QQ":
            return "QQ"
        if self.kind == "GF":
            return f"GF({self.p})"
        return f"dual({self.base.descriptor})"

    def format(self, x) -> str:
        if self.kind == "QQ":
            x = Fraction(x)
            if x.denominator == 1:
                return str(x.numerator)
            return f"{x.numerator}/{x.denominator}"
        if self.kind == "GF":
            return str(int(self(x)))
        x = self(x)
        return f"({self.base.format(x.a)},{self.base.format(x.b)})"

    def parse(self, s: str):
        s = s.strip()
        if self.kind == "QQ":
            return Fraction(s)
        if self.kind == "GF":
            if "/" in s:
                return self(Fraction(s))
            return ModInt(int(s), self.p)
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError(f"bad dual scalar {s!r}")
        a, b = s[1:-1].split(",")
        return Dual(self.base.parse(a), self.base.parse(b))

    def __str__(self):
        return self.descriptor


QQ = RingSpec("QQ")


def GF(p: int) -> RingSpec:
    return RingSpec("GF", p=p)


def dual(base: RingSpec) -> RingSpec:
    return RingSpec("dual", base=base)


def parse_ring(descriptor: str) -> RingSpec:
    """Inverse of :attr:`RingSpec.descriptor`."""
    d = descriptor.strip()
    if d == "QQ":
        return QQ
    if d.startswith("GF(") and d.endswith(")"):
        return GF(int(d[3:-1]))
    if d.startswith("dual(") and d.endswith(")"):
        return dual(parse_ring(d[5:-1]))
    raise ValueError(f"unknown ring descriptor {descriptor!r}")


def random_scalar(ring: RingSpec, rng: np.random.Generator, bound: int = COEFF_BOUND):
    return ring.random(rng, bound)


def ring_of(x) -> RingSpec:
    """Best-effort ring of a single scalar."""
    if isinstance(x, ModInt):
        return GF(x.p)
    if isinstance(x, Dual):
        return dual(ring_of(x.a))
    return QQ
