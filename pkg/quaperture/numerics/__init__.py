"""Numeric kernels shared by all physics modules."""

from quaperture.numerics.failures import NumericalFailure
from quaperture.numerics.quadrature import QuadratureSpec, IntegrationResult, integrate, gauss_legendre,\
    DEFAULT_QUADRATURE, QuadratureConvergenceError
from quaperture.numerics.special import legendre, legendre_table, spherical_bessel, DomainError
from quaperture.numerics.linalg import EigenDecomposition, eig_hermitian, check_hermitian, NotHermitianError,\
    EigenConvergenceError
from quaperture.numerics.differentiation import central_diff
from quaperture.numerics.random import RngStream

__all__ = ["NumericalFailure", "QuadratureSpec", "IntegrationResult", "integrate", "gauss_legendre",
           "DEFAULT_QUADRATURE", "QuadratureConvergenceError", "legendre", "legendre_table", "spherical_bessel",
           "DomainError", "EigenDecomposition", "eig_hermitian", "check_hermitian", "NotHermitianError",
           "EigenConvergenceError", "central_diff", "RngStream"]
