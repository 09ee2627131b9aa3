"""Two-phase quantum walk on the integer line with an origin defect.

Exact unitary evolution, closed-form stationary measures of the
point-spectrum eigenvectors, and the time-averaged limit measure with
its generating-function residue pipeline, plus a CLI and a
verification harness cross-checking simulation against every closed
form.
"""

from .coin import (
    DEFAULT_TOL,
    ModelParams,
    NormalizationError,
    QubitState,
    check_unitary,
    coin_at,
    coin_entry_arrays,
    split_coin,
)
from .evolution import (
    Measure,
    WaveWindow,
    asymmetry_gap,
    distribution,
    evolve_window,
    initial_window,
    max_norm_deviation,
    step,
    time_average,
    time_average_series,
)
from .gflimit import (
    BranchAbsentError,
    OutOfBranchError,
    PoleError,
    SingularSet,
    branch_measure,
    cross_term,
    dphi_dtheta,
    f0,
    f0_at_z,
    lambda0,
    lambda_tilde,
    limit_measure,
    limit_measure_from_residues,
    limit_profile,
    limit_total_mass,
    residue_norm_sq,
    residue_norm_sq_at,
    residue_vector_numeric,
    scan_lambda0_zeros,
    singular_points,
    tilde_phi,
    xi_matrix_at_z,
    xi_tilde_matrix,
)
from .kernels import BACKEND
from .spectral import (
    Eigenpair,
    RootPair,
    eigen_residual,
    eigenvalues,
    eigenvector,
    normalizing_scale,
    stationary_measure,
    stationary_profile,
    theta_roots,
)

__all__ = [
    "BACKEND",
    "BranchAbsentError",
    "DEFAULT_TOL",
    "Eigenpair",
    "Measure",
    "ModelParams",
    "NormalizationError",
    "OutOfBranchError",
    "PoleError",
    "QubitState",
    "RootPair",
    "SingularSet",
    "WaveWindow",
    "asymmetry_gap",
    "branch_measure",
    "check_unitary",
    "coin_at",
    "coin_entry_arrays",
    "cross_term",
    "dphi_dtheta",
    "distribution",
    "eigen_residual",
    "eigenvalues",
    "eigenvector",
    "evolve_window",
    "f0",
    "f0_at_z",
    "initial_window",
    "lambda0",
    "lambda_tilde",
    "limit_measure",
    "limit_measure_from_residues",
    "limit_profile",
    "limit_total_mass",
    "max_norm_deviation",
    "normalizing_scale",
    "residue_norm_sq",
    "residue_norm_sq_at",
    "residue_vector_numeric",
    "scan_lambda0_zeros",
    "singular_points",
    "split_coin",
    "stationary_measure",
    "stationary_profile",
    "step",
    "theta_roots",
    "tilde_phi",
    "time_average",
    "time_average_series",
    "xi_matrix_at_z",
    "xi_tilde_matrix",
]

__version__ = "0.1.0"
