"""Spectral approximation on compact two-point homogeneous spaces."""
from .spaces import Family, SpaceId, SpaceParams, catalog, laplace_eigenvalue, harmonic_dim, cumulative_dim
from .jacobi import JacobiIndex, QuadratureRule, jacobi_P, jacobi_Q, cosine_coeffs, gauss_jacobi
from .zonal import ZonalFunction, random_zonal, lp_norm, energies
from .multipliers import MultiplierSequence, gen_shift_multipliers, eta_multipliers, apply
from .smoothness import k_functional_realized, k_functional_oracle, modulus, equivalence_report
from .kernels import MercerKernel, example_kernel, eigen_sequence, n_width, holder_exponent

__version__ = "0.1.0"

__all__ = [
    "Family", "SpaceId", "SpaceParams", "catalog", "laplace_eigenvalue", "harmonic_dim", "cumulative_dim",
    "JacobiIndex", "QuadratureRule", "jacobi_P", "jacobi_Q", "cosine_coeffs", "gauss_jacobi",
    "ZonalFunction", "random_zonal", "lp_norm", "energies",
    "MultiplierSequence", "gen_shift_multipliers", "eta_multipliers", "apply",
    "k_functional_realized", "k_functional_oracle", "modulus", "equivalence_report",
    "MercerKernel", "example_kernel", "eigen_sequence", "n_width", "holder_exponent",
    "__version__",
]
