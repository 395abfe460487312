"""Finite groups as explicit (or implicit, mixed-radix) multiplication tables.

Every group is a direct product of *atoms*: small groups with a
materialized Cayley table (cyclic, symmetric, dihedral).  Elements of a
product are indexed row-major, i.e. in mixed radix with the first factor
most significant.  The identity is always index 0.

Products with more than :data:`~pgcnn.config.MATERIALIZE_LIMIT` elements never
build a full table; multiplication and inversion work digit by digit.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import config
from .errors import BudgetExceeded, GroupParseError

_ASSOC_EXHAUSTIVE = 64
_ASSOC_SAMPLES = 20000


@dataclass(frozen=True, eq=False)
class _Atom:
    label: str
    table: np.ndarray
    inverse: np.ndarray

    @property
    def order(self) -> int:
        return len(self.inverse)


def _validate_table(table: np.ndarray, label: str) -> np.ndarray:
    n = table.shape[0]
    if table.shape != (n, n):
        raise ValueError(f"{label}: Cayley table must be square")
    idx = np.arange(n)
    if not (np.all(table[0] == idx) and np.all(table[:, 0] == idx)):
        raise ValueError(f"{label}: index 0 is not the identity")
    srt = np.sort(table, axis=1)
    if not (np.all(srt == idx) and np.all(np.sort(table, axis=0) == idx[:, None])):
        raise ValueError(f"{label}: Cayley table is not a Latin square")
    if n <= _ASSOC_EXHAUSTIVE:
        left = table[table[:, :, None], idx[None, None, :]]  # (ij)k
        right = table[idx[:, None, None], table[None, :, :]]  # i(jk)
        ok = np.array_equal(left, right)
    else:
        rng = np.random.default_rng(0)
        i, j, k = rng.integers(0, n, size=(3, _ASSOC_SAMPLES))
        ok = np.array_equal(table[table[i, j], k], table[i, table[j, k]])
    if not ok:
        raise ValueError(f"{label}: multiplication is not associative")
    inverse = np.argmin(table, axis=1)  # column holding the identity (0)
    if not (np.all(table[idx, inverse] == 0) and np.all(table[inverse, idx] == 0)):
        raise ValueError(f"{label}: missing two-sided inverses")
    return inverse


def _atom(label: str, table: np.ndarray) -> _Atom:
    table = np.ascontiguousarray(table, dtype=np.int64)
    inverse = _validate_table(table, label)
    table.setflags(write=False)
    inverse.setflags(write=False)
    return _Atom(label, table, inverse)


class FiniteGroup:
    """A finite group given by a (possibly implicit) Cayley table.

    Groups compare equal when they are built from the same sequence of
    atoms, which implies identical multiplication on indices.  A group made
    by :func:`power_group` additionally remembers ``power_of = (base, m)``.
    """

    def __init__(self, atoms: tuple[_Atom, ...], power_of: tuple[FiniteGroup, int] | None = None):
        if not atoms:
            raise ValueError("a group needs at least one factor")
        self._atoms = atoms
        self._radices = np.array([a.order for a in atoms], dtype=np.int64)
        order = 1
        for a in atoms:
            order *= a.order
        self.order = order
        self._power_of = power_of

    # -- structure ------------------------------------------------------------
    @property
    def identity(self) -> int:
        return 0

    @property
    def label(self) -> str:
        if self._power_of is not None and self._power_of[1] > 1:
            base, m = self._power_of
            b = base.label
            return f"({b})^{m}" if "x" in b else f"{b}^{m}"
        return "x".join(a.label for a in self._atoms)

    @property
    def spec(self) -> str:
        """Spec string accepted by :func:`parse_group` (flattened factors)."""
        return "x".join(a.label for a in self._atoms)

    @property
    def factor_structure(self) -> tuple[FiniteGroup, ...] | None:
        if len(self._atoms) == 1:
            return None
        return tuple(FiniteGroup((a,)) for a in self._atoms)

    @property
    def power_of(self) -> tuple[FiniteGroup, int]:
        """``(G, m)`` when this group was built as ``G^m``, else ``(self, 1)``."""
        return self._power_of if self._power_of is not None else (self, 1)

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return len(self._atoms) == len(other._atoms) and all(
            a is b or a.label == b.label for a, b in zip(self._atoms, other._atoms)
        )

    def __hash__(self):
        return hash(tuple(a.label for a in self._atoms))

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order})"

    # -- indexing ---------------------------------------------------------------
    def _digits(self, idx: np.ndarray) -> list[np.ndarray]:
        out = []
        rest = np.asarray(idx, dtype=np.int64)
        for rad in self._radices[::-1]:
            out.append(rest % rad)
            rest = rest // rad
        return out[::-1]

    def _undigits(self, digits: list[np.ndarray]) -> np.ndarray:
        acc = np.zeros_like(np.asarray(digits[0]), dtype=np.int64)
        for d, rad in zip(digits, self._radices):
            acc = acc * rad + d
        return acc

    def to_tuple(self, i: int) -> tuple[int, ...]:
        """Atom-level coordinates of element ``i``."""
        return tuple(int(d) for d in self._digits(np.int64(i)))

    def from_tuple(self, t) -> int:
        if len(t) != len(self._atoms):
            raise ValueError(f"expected {len(self._atoms)} coordinates, got {len(t)}")
        if any(not 0 <= x < a.order for x, a in zip(t, self._atoms)):
            raise ValueError(f"coordinates {t} out of range")
        return int(self._undigits([np.int64(x) for x in t]))

    # -- arithmetic -------------------------------------------------------------
    def mul_array(self, a, b) -> np.ndarray:
        """Vectorized product ``g_a * g_b`` (numpy broadcasting applies)."""
        if len(self._atoms) == 1:
            return self._atoms[0].table[a, b]
        da, db = self._digits(a), self._digits(b)
        return self._undigits([at.table[x, y] for at, x, y in zip(self._atoms, da, db)])

    def inv_array(self, a) -> np.ndarray:
        if len(self._atoms) == 1:
            return self._atoms[0].inverse[a]
        return self._undigits([at.inverse[x] for at, x in zip(self._atoms, self._digits(a))])

    def mul(self, i: int, j: int) -> int:
        return int(self.mul_array(np.int64(i), np.int64(j)))

    def inv(self, i: int) -> int:
        return int(self.inv_array(np.int64(i)))

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @cached_property
    def inverse(self) -> np.ndarray:
        """Inverse index table of length ``order``."""
        out = self.inv_array(self.elements)
        out.setflags(write=False)
        return out

    @cached_property
    def cayley(self) -> np.ndarray:
        """Materialized ``order x order`` table; refused above the materialize limit."""
        if self.order > config.MATERIALIZE_LIMIT:
            raise BudgetExceeded(
                f"Cayley table of {self.label} ({self.order} elements) is not materialized"
            )
        idx = self.elements
        t = self.mul_array(idx[:, None], idx[None, :])
        t.setflags(write=False)
        return t

    def right_mul_perm(self, h: int) -> np.ndarray:
        """Index array ``k -> k * h``."""
        return self.mul_array(self.elements, np.int64(h))

    def left_mul_perm(self, h: int) -> np.ndarray:
        """Index array ``k -> h * k``."""
        return self.mul_array(np.int64(h), self.elements)

    def is_abelian(self) -> bool:
        return all(np.array_equal(a.table, a.table.T) for a in self._atoms)

    def element(self, i: int) -> GroupElement:
        return GroupElement(self, i)


@dataclass(frozen=True)
class GroupElement:
    group: FiniteGroup
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.group.order:
            raise ValueError(f"index {self.index} out of range for {self.group.label}")

    def __mul__(self, other: GroupElement) -> GroupElement:
        if other.group != self.group:
            raise ValueError("elements of different groups")
        return GroupElement(self.group, self.group.mul(self.index, other.index))

    def inverse(self) -> GroupElement:
        return GroupElement(self.group, self.group.inv(self.index))

    def __int__(self):
        return self.index


def _as_index(g) -> int:
    return g.index if isinstance(g, GroupElement) else int(g)


# -- constructors --------------------------------------------------------------

def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError(f"cyclic group needs n >= 1, got {n}")
    idx = np.arange(n)
    return FiniteGroup((_atom(f"C{n}", (idx[:, None] + idx[None, :]) % n),))


def symmetric(k: int) -> FiniteGroup:
    """S_k, permutations in lexicographic order, ``(s*t)(x) = s(t(x))``."""
    if k < 1:
        raise ValueError(f"symmetric group needs k >= 1, got {k}")
    if k > 6:
        raise BudgetExceeded(f"S_{k} exceeds the size limit (k <= 6)")
    perms = np.array(list(itertools.permutations(range(k))), dtype=np.int64)
    weights = k ** np.arange(k - 1, -1, -1, dtype=np.int64)
    codes = perms @ weights  # increasing, since permutations come out in lex order
    composed = perms[:, perms]  # composed[a, b, x] = perms[a][perms[b][x]]
    table = np.searchsorted(codes, composed @ weights)
    return FiniteGroup((_atom(f"S{k}", table),))


def dihedral(k: int) -> FiniteGroup:
    """Order-2k dihedral group; index ``f*k + i`` is ``s^f r^i``."""
    if k < 2:
        raise ValueError(f"dihedral group needs k >= 2, got {k}")
    idx = np.arange(2 * k)
    f, i = idx // k, idx % k
    fa, ia = f[:, None], i[:, None]
    fb, ib = f[None, :], i[None, :]
    # s^fa r^ia s^fb r^ib = s^(fa+fb) r^((-1)^fb ia + ib)
    rot = (np.where(fb == 1, -ia, ia) + ib) % k
    table = ((fa + fb) % 2) * k + rot
    return FiniteGroup((_atom(f"D{k}", table),))


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    return FiniteGroup(G._atoms + H._atoms)


def power_group(G: FiniteGroup, m: int, budget: int | None = None) -> FiniteGroup:
    """``G^m`` with mixed-radix indexing; checked against the order budget."""
    if m < 1:
        raise ValueError(f"power must be >= 1, got {m}")
    limit = config.max_group_order(budget)
    if G.order**m > limit:
        raise BudgetExceeded(f"{G.label}^{m} has {G.order ** m} elements (budget {limit})")
    if m == 1:
        return G
    return FiniteGroup(G._atoms * m, power_of=(G, m))


def diagonal_indices(G: FiniteGroup, m: int) -> np.ndarray:
    """Indices in ``G^m`` of the diagonal elements ``(g, ..., g)``, by g."""
    n = G.order
    step = sum(n**t for t in range(m))  # (g,...,g) has every base-n digit equal to g
    return G.elements * step


def diagonal_embed(G: FiniteGroup, m: int, g) -> int:
    g = _as_index(g)
    if not 0 <= g < G.order:
        raise ValueError(f"{g} is not an element of {G.label}")
    return int(diagonal_indices(G, m)[g])


_ATOM_RE = re.compile(r"([CSD])(\d+)")


def parse_group(spec: str, budget: int | None = None) -> FiniteGroup:
    """Parse ``atom ("x" atom)*`` with atoms ``C<n>``, ``S<n>``, ``D<n>``."""
    pos = 0
    factors = []
    s = spec.strip()
    if not s:
        raise GroupParseError("empty group spec", 0)
    while True:
        m = _ATOM_RE.match(s, pos)
        if m is None:
            raise GroupParseError(f"expected C<n>, S<n> or D<n> in {spec!r}", pos)
        kind, num = m.group(1), int(m.group(2))
        try:
            factors.append({"C": cyclic, "S": symmetric, "D": dihedral}[kind](num))
        except BudgetExceeded:
            raise
        except ValueError as exc:
            raise GroupParseError(str(exc), pos) from None
        pos = m.end()
        if pos == len(s):
            break
        if s[pos] != "x":
            raise GroupParseError(f"expected 'x' in {spec!r}", pos)
        pos += 1
    G = factors[0]
    for H in factors[1:]:
        G = direct_product(G, H)
    limit = config.max_group_order(budget)
    if G.order > limit:
        raise BudgetExceeded(f"{spec} has {G.order} elements (budget {limit})")
    return G
