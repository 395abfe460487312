"""Dense exact linear algebra over QQ and prime fields.

Over QQ rank and determinant use fraction-free (Bareiss) elimination on the
row-scaled integer matrix; kernels and solves use Gauss-Jordan on
``Fraction`` entries.  Over GF(p) all work happens on reduced integers,
vectorized with numpy ``int64`` when ``p < 2**31``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .rings import QQ, ModInt, RingSpec


class ExactMatrix:
    """Immutable dense matrix with entries in a single exact ring."""

    __slots__ = ("_rows", "ring", "nrows", "ncols", "_modp")

    def __init__(self, entries: Iterable[Iterable], ring: RingSpec = QQ):
        rows = tuple(tuple(ring(x) for x in row) for row in entries)
        self._init(rows, ring, len(rows[0]) if rows else 0)

    def _init(self, rows, ring, ncols):
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        self._rows = rows
        self._modp = None  # cached int64 copy, GF(p) only
        self.ring = ring
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def _raw(cls, rows: tuple, ring: RingSpec, ncols: int | None = None) -> ExactMatrix:
        """Build without coercion; ``rows`` must already hold ring scalars."""
        m = cls.__new__(cls)
        m._init(rows, ring, ncols if ncols is not None else (len(rows[0]) if rows else 0))
        return m

    @classmethod
    def identity(cls, n: int, ring: RingSpec = QQ) -> ExactMatrix:
        one, zero = ring.one(), ring.zero()
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), ring, n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, ring: RingSpec = QQ) -> ExactMatrix:
        zero = ring.zero()
        return cls._raw(tuple((zero,) * ncols for _ in range(nrows)), ring, ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], ring: RingSpec, nrows: int | None = None) -> ExactMatrix:
        if not columns:
            return cls._raw(tuple(() for _ in range(nrows or 0)), ring, 0)
        return cls._raw(tuple(zip(*columns)), ring, len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def transpose(self) -> ExactMatrix:
        return ExactMatrix._raw(tuple(zip(*self._rows)) if self.nrows else (), self.ring, self.nrows)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        return ExactMatrix._raw(rows, self.ring, self.ncols)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._rows)) if other.nrows else [() for _ in range(other.ncols)]
        zero = self.ring.zero()
        rows = tuple(tuple(_dot(r, c, zero) for c in cols) for r in self._rows)
        return ExactMatrix._raw(rows, self.ring, other.ncols)

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product."""
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} for {self.shape} matrix")
        if _fast_mod_p(self.ring):
            p = self.ring.p
            if self._modp is None:
                self._modp = _mod_array(self._rows, p).reshape(self.nrows, self.ncols)
            x = np.array([int(self.ring(a)) for a in v], dtype=np.int64)
            out = np.zeros(self.nrows, dtype=np.int64)
            for j in np.nonzero(x)[0]:
                out = (out + self._modp[:, j] * x[j]) % p
            return tuple(ModInt(int(a), p) for a in out)
        zero = self.ring.zero()
        return tuple(_dot(r, v, zero) for r in self._rows)

    def to_ring(self, ring: RingSpec) -> ExactMatrix:
        """Reduce entries into another ring (e.g. QQ -> GF(p))."""
        return ExactMatrix(self._rows, ring)

    def __repr__(self):
        body = "; ".join(" ".join(self.ring.format(x) for x in r) for r in self._rows[:8])
        more = " ..." if self.nrows > 8 else ""
        return f"ExactMatrix<{self.nrows}x{self.ncols} over {self.ring}>[{body}{more}]"


def _dot(r, c, zero):
    acc = zero
    for a, b in zip(r, c):
        if a and b:
            acc = acc + a * b
    return acc


def _check_field(M: ExactMatrix) -> None:
    if not M.ring.is_field:
        raise TypeError(f"{M.ring} is not a field; rank, kernel and det are undefined")


# -- QQ helpers ------------------------------------------------------------

def _integer_rows(rows) -> tuple[list[list[int]], list[int]]:
    """Scale each rational row to integers; return (rows, scale factors)."""
    out, scales = [], []
    for r in rows:
        s = lcm(*(Fraction(x).denominator for x in r)) if r else 1
        out.append([int(Fraction(x) * s) for x in r])
        scales.append(s)
    return out, scales


def _bareiss(A: list[list[int]]) -> tuple[int, int, list[int], list[int]]:
    """Fraction-free elimination in place.

    Returns (rank, swap sign, pivot columns, original row index of each
    pivot row).  Pivot = first nonzero entry scanning columns left to right.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    order = list(range(m))
    prev, r, sign = 1, 0, 1
    pivcols = []
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
            order[r], order[piv] = order[piv], order[r]
            sign = -sign
        prc = A[r][c]
        Ar = A[r]
        for i in range(r + 1, m):
            Ai = A[i]
            aic = Ai[c]
            for j in range(c + 1, n):
                Ai[j] = (prc * Ai[j] - aic * Ar[j]) // prev
            Ai[c] = 0
        prev = prc
        pivcols.append(c)
        r += 1
    return r, sign, pivcols, order[:r]


def _rref_fraction(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    A = [list(r) for r in rows]
    m = len(A)
    pivcols = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        Ar = A[r]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], Ar)]
        pivcols.append(c)
        r += 1
    return A[:r], pivcols


# -- GF(p) helpers ---------------------------------------------------------

def _fast_mod_p(ring: RingSpec) -> bool:
    return ring.kind == "GF" and ring.p < 2**31


def _mod_array(rows, p: int) -> np.ndarray:
    dtype = np.int64 if p < 2**31 else object
    data = [[int(x) for x in r] for r in rows]
    if not data:
        return np.zeros((0, 0), dtype=dtype)
    return np.array(data, dtype=dtype) % p


def _rref_mod_p(A: np.ndarray, p: int, reduce_above: bool = True) -> tuple[np.ndarray, list[int], int]:
    """Row-reduce a copy of ``A`` over F_p.  Returns (R, pivot cols, swap sign)."""
    A = A.copy()
    m, n = A.shape
    pivcols = []
    r, sign = 0, 1
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
            sign = -sign
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        targets = np.arange(m) if reduce_above else np.arange(r + 1, m)
        targets = targets[(targets != r)]
        if len(targets):
            f = A[targets, c].reshape(-1, 1)
            A[targets] = (A[targets] - f * A[r]) % p
        pivcols.append(c)
        r += 1
    return A[:r], pivcols, sign


# -- public operations -----------------------------------------------------

def mat_rank(M: ExactMatrix) -> int:
    """Exact rank over QQ (Bareiss) or GF(p) (Gaussian elimination)."""
    _check_field(M)
    if M.nrows == 0 or M.ncols == 0:
        return 0
    rows = M.rows if M.nrows <= M.ncols else M.transpose().rows
    if M.ring.kind == "QQ":
        A, _ = _integer_rows(rows)
        return _bareiss(A)[0]
    _, piv, _ = _rref_mod_p(_mod_array(rows, M.ring.p), M.ring.p, reduce_above=False)
    return len(piv)


def mat_det(M: ExactMatrix):
    _check_field(M)
    if M.nrows != M.ncols:
        raise ValueError(f"determinant of a non-square {M.shape} matrix")
    n = M.nrows
    if n == 0:
        return M.ring.one()
    if M.ring.kind == "QQ":
        A, scales = _integer_rows(M.rows)
        rank, sign, _, _ = _bareiss(A)
        if rank < n:
            return Fraction(0)
        den = 1
        for s in scales:
            den *= s
        return Fraction(sign * A[n - 1][n - 1], den)
    p = M.ring.p
    A = _mod_array(M.rows, p)
    det = 1
    sign = 1
    for c in range(n):
        nz = np.nonzero(A[c:, c])[0]
        if len(nz) == 0:
            return ModInt(0, p)
        piv = c + int(nz[0])
        if piv != c:
            A[[c, piv]] = A[[piv, c]]
            sign = -sign
        d = int(A[c, c])
        det = det * d % p
        inv = pow(d, -1, p)
        if c + 1 < n:
            f = (A[c + 1:, c] * inv % p).reshape(-1, 1)
            A[c + 1:] = (A[c + 1:] - f * A[c]) % p
    return ModInt(sign * det, p)


def _independent_rows_qq(M: ExactMatrix) -> list[int]:
    A, _ = _integer_rows(M.transpose().rows)
    _, _, pivcols, _ = _bareiss(A)
    return pivcols


def mat_kernel(M: ExactMatrix) -> list[tuple]:
    """Basis of the right kernel ``{v : M v = 0}``, one vector per free column."""
    _check_field(M)
    n = M.ncols
    if M.nrows == 0:
        R, pivcols = [], []
    elif M.ring.kind == "QQ":
        keep = _independent_rows_qq(M) if M.nrows > M.ncols else range(M.nrows)
        R, pivcols = _rref_fraction([[Fraction(x) for x in M.row(i)] for i in keep], n)
    else:
        p = M.ring.p
        Rm, pivcols, _ = _rref_mod_p(_mod_array(M.rows, p), p)
        R = [[ModInt(int(x), p) for x in row] for row in Rm]
    ring = M.ring
    zero, one = ring.zero(), ring.one()
    pivset = set(pivcols)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [zero] * n
        v[f] = one
        for k, pc in enumerate(pivcols):
            v[pc] = -R[k][f]
        basis.append(tuple(v))
    return basis


def mat_solve(M: ExactMatrix, b: Sequence):
    """Unique solution of ``M x = b`` or ``None`` when ``M`` is singular."""
    _check_field(M)
    if M.nrows != M.ncols:
        raise ValueError(f"solve needs a square matrix, got {M.shape}")
    if len(b) != M.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {M.nrows}")
    n = M.nrows
    ring = M.ring
    if ring.kind == "QQ":
        aug = [[Fraction(x) for x in row] + [Fraction(ring(bi))] for row, bi in zip(M.rows, b)]
        R, pivcols = _rref_fraction(aug, n)
        if len(pivcols) < n:
            return None
        return tuple(row[n] for row in R)
    p = ring.p
    aug = _mod_array([list(row) + [ring(bi)] for row, bi in zip(M.rows, b)], p)
    R, pivcols, _ = _rref_mod_p(aug, p)
    if len(pivcols) < n or pivcols[-1] >= n:
        return None
    return tuple(ModInt(int(row[n]), p) for row in R)


def is_zero_vector(v: Iterable) -> bool:
    return not any(v)
