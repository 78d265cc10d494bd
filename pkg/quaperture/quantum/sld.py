"""Symmetric logarithmic derivative (SLD) of a density matrix.

With rho = sum_j D_j |e_j><e_j| the SLD solving d rho = (rho L + L rho)/2 is

    L = sum_{j,k: D_j + D_k > tau} 2 <e_j|d rho|e_k> / (D_j + D_k) |e_j><e_k|

with the cutoff tau = 1e-12 * max_j D_j. Pairs below the cutoff carry no information and are skipped.
"""
import logging
from typing import NamedTuple, Optional

import numpy

from quaperture.numerics.linalg import EigenDecomposition, eig_hermitian, check_hermitian

__all__ = ["SldResult", "sld", "sld_residual", "DEFAULT_PAIR_CUTOFF"]


#: relative eigenvalue pair cutoff
DEFAULT_PAIR_CUTOFF = 1e-12


class SldResult(NamedTuple('SldResult', [('matrix', numpy.ndarray),
                                         ('eigen', EigenDecomposition),
                                         ('support', numpy.ndarray),
                                         ('skipped_pairs', int)])):
    """The SLD, the eigendecomposition of rho it was built in, the mask of eigenvalues above the cutoff and the
    number of skipped eigenvalue pairs."""
    __slots__ = ()

    def expectation_of_square(self, rho: numpy.ndarray) -> float:
        """tr(rho L^2)"""
        return float(numpy.real(numpy.trace(rho @ self.matrix @ self.matrix)))

    @property
    def support_projector(self) -> numpy.ndarray:
        vectors = self.eigen.eigenvectors[:, self.support]
        return vectors @ vectors.conj().T


def sld(rho: numpy.ndarray, drho: numpy.ndarray, *, method: str='jacobi',
        cutoff: float=DEFAULT_PAIR_CUTOFF, logger: Optional[logging.Logger]=None) -> SldResult:
    logger = logger or logging.getLogger("quaperture.sld")
    rho = check_hermitian(rho)
    drho = check_hermitian(drho)
    if rho.shape != drho.shape:
        raise ValueError('rho and its derivative have different shapes', rho.shape, drho.shape)

    eigen = eig_hermitian(rho, method=method)
    values = eigen.eigenvalues
    vectors = eigen.eigenvectors
    tau = cutoff * max(float(values[0]), 0.)

    pair_sums = values[:, numpy.newaxis] + values[numpy.newaxis, :]
    retained = pair_sums > tau
    skipped = int(retained.size - numpy.count_nonzero(retained))

    derivative_in_eigenbasis = vectors.conj().T @ drho @ vectors
    sld_in_eigenbasis = numpy.zeros_like(derivative_in_eigenbasis)
    sld_in_eigenbasis[retained] = 2 * derivative_in_eigenbasis[retained] / pair_sums[retained]
    if skipped:
        logger.debug("Skipped %d of %d eigenvalue pairs below %g", skipped, retained.size, tau)

    matrix = vectors @ sld_in_eigenbasis @ vectors.conj().T
    matrix = 0.5 * (matrix + matrix.conj().T)
    return SldResult(matrix, eigen, values > tau, skipped)


def sld_residual(rho: numpy.ndarray, drho: numpy.ndarray, result: SldResult) -> float:
    """Frobenius norm of P (d rho - (rho L + L rho)/2) P with P the projector on the retained eigenspace."""
    projector = result.support_projector
    mismatch = drho - 0.5 * (rho @ result.matrix + result.matrix @ rho)
    return float(numpy.linalg.norm(projector @ mismatch @ projector))
