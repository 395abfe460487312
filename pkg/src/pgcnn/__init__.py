"""Exact graded-group-algebra tools for polynomial group convolutional networks."""

from .errors import BudgetExceeded, GroupParseError, RingMismatch
from .rings import GF, QQ, Dual, ModInt, RingSpec, dual, parse_ring
from .groups import (
    FiniteGroup,
    GroupElement,
    cyclic,
    diagonal_embed,
    diagonal_indices,
    dihedral,
    direct_product,
    parse_group,
    power_group,
    symmetric,
)
from .linalg import ExactMatrix, mat_det, mat_kernel, mat_rank, mat_solve
from .filters import (
    Filter,
    circulant_matrix,
    convolve,
    cross_correlate,
    extend_diagonal,
    filter_det,
    filter_inverse,
    hadamard,
    hadamard_power,
    involution,
    kron,
    kron_power,
    left_translate,
    restrict_diagonal,
    right_translate,
    verify_det_formulae,
)
from .poly import Poly, PolyFilter, monomials, poly_coefficient
from .maps import (
    Architecture,
    ParameterTuple,
    Phi_map,
    check_commute,
    evaluate_network,
    lambda_map,
    lambda_matrix,
    phi_map,
    sample_parameters,
)
from .jacobian import (
    JacobianReport,
    certify_point,
    certify_trial,
    dimension_passed,
    euler_constant,
    jac_Phi,
    jac_phi,
    parse_ring_policy,
    predicted_kernel_basis,
    verify_dimension,
)
from .fibers import (
    FiberReport,
    ProbeReport,
    predicted_fiber,
    random_collision_probe,
    rescale_tuple,
    translate_tuple,
    verify_fiber,
)
from .identities import IdentitySuiteReport, run_identity_suite
from .report import RunConfig, VerificationReport

__version__ = "0.1.0"
