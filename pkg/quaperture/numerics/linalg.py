"""Complex Hermitian eigendecomposition.

The default solver is the cyclic Jacobi method for complex Hermitian matrices: every off-diagonal element (p, q) is
annihilated in turn by a unitary plane rotation U = diag(1, exp(-i*phi)) R(t) where phi is the phase of H[p, q]
and R(t) the real Jacobi rotation of the resulting real symmetric 2x2 block. The dimensions met here (a few
hundred at most) keep the O(n^3) per-sweep cost small.
"""
import logging
import math
from typing import NamedTuple

import numpy

from quaperture.numerics.failures import NumericalFailure

__all__ = ["EigenDecomposition", "eig_hermitian", "check_hermitian", "hermitian_residual", "NotHermitianError",
           "EigenConvergenceError", "HERMITIAN_TOLERANCE", "DEFAULT_JACOBI_TOLERANCE"]


logger = logging.getLogger("quaperture.linalg")

HERMITIAN_TOLERANCE = 1e-12

#: off-diagonal Frobenius norm relative to ||H|| at which Jacobi stops
DEFAULT_JACOBI_TOLERANCE = 1e-14


class EigenDecomposition(NamedTuple('EigenDecomposition', [('eigenvalues', numpy.ndarray),
                                                           ('eigenvectors', numpy.ndarray)])):
    """Eigenvalues in descending order and the matching orthonormal eigenvectors as columns."""
    __slots__ = ()

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> numpy.ndarray:
        vectors = self.eigenvectors
        return (vectors * self.eigenvalues) @ vectors.conj().T

    def reconstruction_error(self, matrix: numpy.ndarray) -> float:
        return float(numpy.linalg.norm(matrix - self.reconstruct()))

    def orthonormality_error(self) -> float:
        vectors = self.eigenvectors
        return float(numpy.linalg.norm(vectors.conj().T @ vectors - numpy.eye(self.dim)))


def hermitian_residual(matrix: numpy.ndarray) -> float:
    """Largest absolute deviation from matrix = matrix^dagger."""
    matrix = numpy.asarray(matrix)
    return float(numpy.max(numpy.abs(matrix - matrix.conj().T))) if matrix.size else 0.


def check_hermitian(matrix: numpy.ndarray, tolerance: float=HERMITIAN_TOLERANCE) -> numpy.ndarray:
    """Validate a square Hermitian matrix and return its exactly Hermitian part as complex array.

    The tolerance is absolute for matrices with entries of order one and relative to the largest entry otherwise."""
    matrix = numpy.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise NotHermitianError(matrix.shape, float('nan'))
    scale = max(1., float(numpy.max(numpy.abs(matrix))))
    residual = hermitian_residual(matrix)
    if residual > tolerance * scale:
        raise NotHermitianError(matrix.shape, residual)
    return 0.5 * (matrix + matrix.conj().T)


def _jacobi(matrix: numpy.ndarray, max_sweeps: int, tolerance: float) -> EigenDecomposition:
    a = numpy.array(matrix, dtype=complex)
    dim = a.shape[0]
    vectors = numpy.eye(dim, dtype=complex)

    scale = float(numpy.linalg.norm(a))
    if scale == 0.:
        return EigenDecomposition(numpy.zeros(dim), vectors)
    skip_below = tolerance * scale / dim

    for sweep in range(max_sweeps + 1):
        off_diagonal = float(numpy.linalg.norm(a - numpy.diag(numpy.diag(a))))
        if off_diagonal <= tolerance * scale:
            logger.debug("Jacobi converged after %d sweeps (dim=%d, off-diagonal norm %g)", sweep, dim, off_diagonal)
            break
        if sweep == max_sweeps:
            raise EigenConvergenceError(max_sweeps, off_diagonal / scale)

        for p in range(dim - 1):
            for q in range(p + 1, dim):
                element = a[p, q]
                magnitude = abs(element)
                if magnitude <= skip_below:
                    continue
                tau = (a[q, q].real - a[p, p].real) / (2 * magnitude)
                t = math.copysign(1., tau) / (abs(tau) + math.hypot(1., tau))
                c = 1 / math.sqrt(1 + t * t)
                s = t * c
                phase = (element / magnitude).conjugate()
                rotation = numpy.array([[c, s],
                                        [-s * phase, c * phase]])
                pair = [p, q]
                a[:, pair] = a[:, pair] @ rotation
                a[pair, :] = rotation.conj().T @ a[pair, :]
                vectors[:, pair] = vectors[:, pair] @ rotation
                a[p, q] = a[q, p] = 0.
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

    eigenvalues = numpy.real(numpy.diag(a))
    order = numpy.argsort(-eigenvalues, kind='stable')
    return EigenDecomposition(eigenvalues[order], vectors[:, order])


def _lapack(matrix: numpy.ndarray) -> EigenDecomposition:
    eigenvalues, vectors = numpy.linalg.eigh(matrix)
    return EigenDecomposition(eigenvalues[::-1].copy(), vectors[:, ::-1].copy())


def eig_hermitian(matrix: numpy.ndarray, *, method: str='jacobi', tolerance: float=DEFAULT_JACOBI_TOLERANCE,
                  max_sweeps: int=60) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix with eigenvalues sorted in descending order.

    Args:
        matrix: Square matrix that is Hermitian to :data:`HERMITIAN_TOLERANCE`.
        method: 'jacobi' (cyclic complex Jacobi) or 'lapack' (:func:`numpy.linalg.eigh`).
        tolerance: Jacobi stops once the off-diagonal Frobenius norm is below tolerance * ||H||.
        max_sweeps: Jacobi raises EigenConvergenceError after this many sweeps.

    Raises:
        NotHermitianError: input is not square or not Hermitian.
        EigenConvergenceError: Jacobi did not converge.
    """
    matrix = check_hermitian(matrix)
    if method == 'jacobi':
        return _jacobi(matrix, max_sweeps, tolerance)
    elif method == 'lapack':
        return _lapack(matrix)
    raise ValueError('Unknown eigen solver', method)


class NotHermitianError(ValueError):
    """The matrix handed to an eigen solver is not square Hermitian."""

    def __init__(self, shape, residual: float) -> None:
        super().__init__()
        self.shape = shape
        self.residual = residual

    def __str__(self) -> str:
        return "Expected a square Hermitian matrix but got shape {} with |H - H^dagger|_max = {:g}".format(
            self.shape, self.residual)


class EigenConvergenceError(NumericalFailure):
    def __init__(self, sweeps: int, relative_off_diagonal: float) -> None:
        super().__init__()
        self.sweeps = sweeps
        self.relative_off_diagonal = relative_off_diagonal

    def __str__(self) -> str:
        return "Jacobi eigen solver did not converge in {} sweeps (relative off-diagonal norm {:g})".format(
            self.sweeps, self.relative_off_diagonal)
