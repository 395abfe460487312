"""General fibers are orbits of group translations between consecutive layers."""

# %%
import numpy as np

from pgcnn import QQ, Architecture, parse_group
from pgcnn.fibers import (
    predicted_fiber,
    random_collision_probe,
    rescale_tuple,
    translate_tuple,
    verify_fiber,
)
from pgcnn.maps import Phi_map, sample_parameters

S3 = parse_group("S3")
arch = Architecture(S3, layers=2, degree=2)
theta = sample_parameters(arch, QQ, np.random.default_rng(0))

psi = translate_tuple(theta, [4])
print("translated tuple:", psi)
print("same Phi:", Phi_map(arch, psi) == Phi_map(arch, theta))

# %% rescaling by (lambda, lambda^-r) is invisible as well
print("rescaled same Phi:", Phi_map(arch, rescale_tuple(psi, [3], 2)) == Phi_map(arch, theta))
print("lambda^+r instead:", Phi_map(arch, rescale_tuple(psi, [3], 2, sign=1)) == Phi_map(arch, theta))

# %% one tuple per group element, pairwise inequivalent
rep = verify_fiber(arch, theta)
print(f"{rep.predicted_size} predicted, {rep.phi_matches} phi matches, "
      f"{rep.Phi_matches} Phi matches, {rep.distinct_orbits} distinct")

# %% random search for collisions outside the predicted orbit
probe = random_collision_probe(arch, theta, 2000, np.random.default_rng(1), inject=[predicted_fiber(theta)[3]])
print(probe)
