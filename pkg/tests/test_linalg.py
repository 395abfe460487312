from fractions import Fraction

import numpy as np
import pytest
import sympy

from pgcnn.config import DEFAULT_PRIMES
from pgcnn.linalg import ExactMatrix, is_zero_vector, mat_det, mat_kernel, mat_rank, mat_solve
from pgcnn.rings import GF, QQ, dual


def random_int_matrix(rng, m, n, rank=None, bound=9):
    """Integer matrix, optionally of prescribed (generic) rank via a product."""
    if rank is None:
        return rng.integers(-bound, bound + 1, size=(m, n)).tolist()
    A = rng.integers(-bound, bound + 1, size=(m, rank))
    B = rng.integers(-bound, bound + 1, size=(rank, n))
    return (A @ B).tolist()


def test_rank_of_symbolic_example_at_a_point():
    y1, y2 = 2, 1
    assert mat_rank(ExactMatrix([[y1, y2], [y2, y1]])) == 2


def test_rank_trivial_cases():
    assert mat_rank(ExactMatrix.zeros(3, 4)) == 0
    assert mat_rank(ExactMatrix.identity(5)) == 5
    assert mat_rank(ExactMatrix.identity(5, GF(DEFAULT_PRIMES[0]))) == 5


def test_rank_rejects_dual_ring():
    with pytest.raises(TypeError):
        mat_rank(ExactMatrix.identity(2, dual(QQ)))


def test_rank_agrees_across_qq_and_three_primes():
    rng = np.random.default_rng(2024)
    for trial in range(100):
        m, n = (int(x) for x in rng.integers(1, 9, size=2))
        k = int(rng.integers(0, min(m, n) + 1))
        rows = random_int_matrix(rng, m, n, rank=k)
        r_qq = mat_rank(ExactMatrix(rows))
        assert r_qq == sympy.Matrix(rows).rank()
        for p in DEFAULT_PRIMES:
            assert mat_rank(ExactMatrix(rows, GF(p))) == r_qq


def test_tall_and_wide_rational_rank():
    rng = np.random.default_rng(5)
    rows = random_int_matrix(rng, 30, 4, rank=3)
    assert mat_rank(ExactMatrix(rows)) == 3
    assert mat_rank(ExactMatrix(rows).transpose()) == 3


def test_kernel_examples():
    (v,) = mat_kernel(ExactMatrix([[1, 1]]))
    assert v[0] == -v[1] != 0
    assert mat_kernel(ExactMatrix.identity(4)) == []


@pytest.mark.parametrize("ring", [QQ, GF(DEFAULT_PRIMES[1])])
def test_rank_nullity_on_random_6x9(ring):
    rng = np.random.default_rng(11)
    for _ in range(50):
        k = int(rng.integers(0, 7))
        M = ExactMatrix(random_int_matrix(rng, 6, 9, rank=k), ring)
        basis = mat_kernel(M)
        assert len(basis) == 9 - mat_rank(M)
        for v in basis:
            assert is_zero_vector(M.apply(v))
        if basis:
            assert mat_rank(ExactMatrix.from_columns(basis, ring)) == len(basis)


def test_kernel_of_tall_rational_matrix():
    rng = np.random.default_rng(3)
    M = ExactMatrix(random_int_matrix(rng, 40, 6, rank=4))
    basis = mat_kernel(M)
    assert len(basis) == 2
    assert all(is_zero_vector(M.apply(v)) for v in basis)


def test_det_examples():
    a, b = 3, 2
    assert mat_det(ExactMatrix([[a, b], [b, a]])) == a * a - b * b
    assert mat_det(ExactMatrix.identity(6)) == 1


def test_det_non_square():
    with pytest.raises(ValueError):
        mat_det(ExactMatrix([[1, 2, 3]]))


def test_det_matches_sympy_and_is_multiplicative():
    rng = np.random.default_rng(7)
    for _ in range(30):
        A = random_int_matrix(rng, 4, 4)
        B = random_int_matrix(rng, 4, 4)
        dA, dB = mat_det(ExactMatrix(A)), mat_det(ExactMatrix(B))
        assert dA == sympy.Matrix(A).det()
        assert mat_det(ExactMatrix(A) @ ExactMatrix(B)) == dA * dB


def test_det_over_gf_matches_reduction():
    rng = np.random.default_rng(8)
    p = DEFAULT_PRIMES[2]
    for _ in range(20):
        A = random_int_matrix(rng, 5, 5, bound=1000)
        assert int(mat_det(ExactMatrix(A, GF(p)))) == int(sympy.Matrix(A).det()) % p


def test_det_of_rational_matrix():
    M = ExactMatrix([[Fraction(1, 2), 1], [Fraction(1, 3), 1]])
    assert mat_det(M) == Fraction(1, 6)


def test_solve_examples():
    b = (Fraction(3), Fraction(-1), Fraction(2, 7))
    assert mat_solve(ExactMatrix.identity(3), b) == b
    a, c = 2, 1
    assert mat_solve(ExactMatrix([[a, c], [c, a]]), [1, 0]) == (Fraction(2, 3), Fraction(-1, 3))
    assert mat_solve(ExactMatrix([[1, 1], [1, 1]]), [1, 0]) is None


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        mat_solve(ExactMatrix.identity(2), [1, 2, 3])
    with pytest.raises(ValueError):
        mat_solve(ExactMatrix([[1, 2, 3]]), [1])


def test_solve_over_gf():
    p = DEFAULT_PRIMES[0]
    rng = np.random.default_rng(9)
    A = random_int_matrix(rng, 4, 4, bound=100)
    M = ExactMatrix(A, GF(p))
    x = mat_solve(M, [1, 2, 3, 4])
    assert M.apply(x) == tuple(GF(p)(v) for v in (1, 2, 3, 4))


def test_matrix_product_and_sum():
    A = ExactMatrix([[1, 2], [3, 4]])
    B = ExactMatrix([[0, 1], [1, 0]])
    assert A @ B == ExactMatrix([[2, 1], [4, 3]])
    assert A + B == ExactMatrix([[1, 3], [4, 4]])
    assert A.transpose() == ExactMatrix([[1, 3], [2, 4]])


def test_apply_fast_path_matches_generic():
    p = DEFAULT_PRIMES[0]
    rng = np.random.default_rng(4)
    rows = random_int_matrix(rng, 7, 5, bound=10**6)
    v = [int(x) for x in rng.integers(-10**6, 10**6, size=5)]
    fast = ExactMatrix(rows, GF(p)).apply(v)
    slow = tuple(sum(a * b for a, b in zip(r, v)) % p for r in rows)
    assert tuple(int(x) for x in fast) == slow
