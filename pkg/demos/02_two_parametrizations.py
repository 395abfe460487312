"""The Kronecker-form map phi, the polynomial map Phi, and the collapse Lambda between them."""

# %%
from pgcnn import Architecture, Filter, ParameterTuple, parse_group
from pgcnn.maps import Phi_map, check_commute, lambda_map, phi_map

C2 = parse_group("C2")
arch = Architecture(C2, layers=2, degree=2)
theta = ParameterTuple.of([Filter.of(C2, [2, 3]), Filter.of(C2, [5, 7])])

phi = phi_map(arch, theta)
print("phi on C2^2:", phi)

# %% Phi_theta(e) is a quadratic form in x_0, x_1
P = Phi_map(arch, theta)
print("Phi(e) =", P[0])
print("Phi(1) =", P[1])

# %% Lambda sends phi to Phi(e) by merging coordinates with the same multiset
print("Lambda(phi) == Phi(e):", lambda_map(arch, phi) == P[0])
print("diagram commutes:", check_commute(arch, theta))

# %% deeper networks: phi lives on G^(r^(L-1)), Phi(e) has degree r^(L-1)
from pgcnn.poly import monomial_count

for L in range(1, 5):
    deep = Architecture(C2, L, 2)
    order = deep.kronecker_group().order
    print(f"L={L}: phi has {order} coordinates, Phi(e) has {monomial_count(2, deep.output_degree)} monomials")
