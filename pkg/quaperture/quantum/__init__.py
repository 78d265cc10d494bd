"""Single-photon states, symmetric logarithmic derivatives and quantum Fisher information."""

from quaperture.quantum.density import DensityMatrix, density_matrix, density_matrix_derivative,\
    TruncationError, TruncationBiasWarning
from quaperture.quantum.sld import SldResult, sld, sld_residual
from quaperture.quantum.qfi import QfiResult, TwoPointSldWorkspace, qfi_numeric, qfi_two_point_analytic,\
    two_point_sld_workspace

__all__ = ["DensityMatrix", "density_matrix", "density_matrix_derivative", "TruncationError",
           "TruncationBiasWarning", "SldResult", "sld", "sld_residual", "QfiResult", "TwoPointSldWorkspace",
           "qfi_numeric", "qfi_two_point_analytic", "two_point_sld_workspace"]
