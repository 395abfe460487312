"""Certifying the dimension L(n-1)+1 and the explicit (L-1)-dimensional Jacobian kernel."""

# %%
import numpy as np

from pgcnn import QQ, Architecture, parse_group
from pgcnn.jacobian import (
    dimension_passed,
    euler_constant,
    jac_phi,
    jac_Phi,
    kernel_membership,
    predicted_kernel_basis,
    verify_dimension,
)
from pgcnn.linalg import mat_rank
from pgcnn.maps import phi_map, sample_parameters

arch = Architecture(parse_group("C4"), layers=3, degree=2)
theta = sample_parameters(arch, QQ, np.random.default_rng(1))
Jp, JP = jac_phi(arch, theta), jac_Phi(arch, theta)
print(f"J_phi is {Jp.nrows}x{Jp.ncols}, J_Phi is {JP.nrows}x{JP.ncols}")
print("rank J_phi =", mat_rank(Jp), " rank J_Phi =", mat_rank(JP), " predicted =", arch.predicted_rank)

# %% (theta_l, -r theta_{l+1}) spans the kernel
for v in predicted_kernel_basis(theta, arch.degree):
    print("kernel vector annihilated:", kernel_membership(Jp, v), kernel_membership(JP, v))

# %% Euler's identity for the multihomogeneous map
k = euler_constant(arch)
phi = phi_map(arch, theta).coeffs
print(f"J_phi theta == {k} phi:", Jp.apply(theta.to_vector()) == tuple(k * c for c in phi))

# %% the same check over three large primes at three random points
reports = verify_dimension(arch, trials=3, policy="fp3")
print(f"{len(reports)} rank certificates, all pass:", dimension_passed(reports))
