"""Certified Newton's method for square polynomial systems over Q_p."""

from .errors import *  # noqa: F401,F403
from .oracle import ResidueRoot, nearest_root_distance, roots_mod_pk
from .polysys import (
    DerivTensor,
    Polynomial,
    PolySystem,
    evaluate,
    jacobian,
    parse_system,
    scaled_derivative_tensor,
    taylor_coefficients,
    tensor_norm,
)
from .smale import (
    Certificate,
    NewtonTrace,
    SmaleParams,
    alpha,
    beta,
    certify,
    gamma,
    gamma_distance_check,
    hensel_univariate_check,
    lemma_quantities,
    newton_step,
    separation_gamma,
    solve,
    solve_certified,
)
from .ultralinalg import apply_inverse_to_tensor, invert_matrix, norm, solve_linear
from .ultrascalar import (
    PadicScalar,
    PrimeContext,
    UltraMag,
    arith,
    invert,
    mag_ops,
    magnitude,
    residue,
    scalar_from_rational,
)

__version__ = "0.1.0"
