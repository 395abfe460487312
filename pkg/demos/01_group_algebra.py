"""Filters on a finite group: convolution, circulants, Kronecker and Hadamard products."""

# %%
import numpy as np

from pgcnn import QQ, Filter, parse_group
from pgcnn.filters import (
    circulant_matrix,
    convolve,
    hadamard_power,
    kron_power,
    restrict_diagonal,
    verify_det_formulae,
)

S3 = parse_group("S3")
rng = np.random.default_rng(0)
a, b = Filter.random(S3, QQ, rng), Filter.random(S3, QQ, rng)
print("a     =", a)
print("b     =", b)
print("a * b =", convolve(a, b))
print("b * a =", convolve(b, a), "(S3 is not abelian)")

# %% circulant matrices turn convolution into matrix products
Ma, Mb = circulant_matrix(a), circulant_matrix(b)
print("Mat(a*b) == Mat(a) Mat(b):", circulant_matrix(convolve(a, b)) == Ma @ Mb)

# %% the activation sigma_2 is a Kronecker square restricted to the diagonal
lhs = hadamard_power(convolve(a, b), 2)
rhs = restrict_diagonal(convolve(kron_power(a, 2), kron_power(b, 2)))
print("sigma_2(a*b) == (a(x)a * b(x)b)|diag:", lhs == rhs)

# %% determinant exponents are measured rather than assumed
C2 = parse_group("C2")
rep = verify_det_formulae(Filter.of(C2, [2, 1]), 2)
print(f"det theta = {rep.det_theta}, det kron = {rep.det_kron}, det ext = {rep.det_ext}")
print(f"kron exponent measured {rep.kron_exponent}; r*n^(r-1) = {rep.derived_kron_exponent}; "
      f"r*n^r = {rep.stated_kron_exponent}")
