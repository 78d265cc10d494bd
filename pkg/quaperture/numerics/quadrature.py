"""Adaptive quadrature on truncated infinite domains and on finite intervals.

Integrals over the whole image plane are truncated to [-L*sigma, L*sigma] and split into panels of width sigma
which are integrated separately with QUADPACK (:func:`scipy.integrate.quad`). Integrands built from sinc-type PSFs
decay like 1/x^2, so every result carries the tail bound 2*C/(pi^2*L) where C is the 1/x^2 envelope coefficient
of the integrand in sigma units, i.e. |f(x)| <= C*sigma/(pi^2*x^2) outside the domain.
"""
import logging
import math
from typing import Callable, NamedTuple, Optional, Sequence, Tuple, List

import numpy
from scipy import integrate as scipy_integrate

from quaperture.numerics.failures import NumericalFailure

__all__ = ["QuadratureSpec", "IntegrationResult", "integrate", "gauss_legendre", "DEFAULT_QUADRATURE",
           "QuadratureConvergenceError"]


logger = logging.getLogger("quaperture.quadrature")


class QuadratureSpec(NamedTuple('QuadratureSpec', [('rel_tol', float),
                                                   ('abs_tol', float),
                                                   ('domain_halfwidth', float),
                                                   ('max_subdivisions', int)])):
    """Accuracy contract of :func:`integrate`. domain_halfwidth is L in multiples of sigma."""
    __slots__ = ()

    def __new__(cls, rel_tol: float=1e-10, abs_tol: float=1e-12, domain_halfwidth: float=50.,
                max_subdivisions: int=200):
        if not rel_tol > 0:
            raise ValueError('rel_tol must be positive', rel_tol)
        if not abs_tol >= 0:
            raise ValueError('abs_tol must not be negative', abs_tol)
        if not domain_halfwidth > 0:
            raise ValueError('The domain half width L must be positive', domain_halfwidth)
        if int(max_subdivisions) < 1:
            raise ValueError('max_subdivisions must be at least one', max_subdivisions)
        return super().__new__(cls, float(rel_tol), float(abs_tol), float(domain_halfwidth), int(max_subdivisions))

    def halfwidth(self, sigma: float) -> float:
        return self.domain_halfwidth * sigma

    def tail_bound(self, envelope: float) -> float:
        """Bound on the integral outside [-L*sigma, L*sigma] for |f(x)| <= envelope*sigma/(pi^2*x^2)."""
        return 2 * envelope / (math.pi ** 2 * self.domain_halfwidth)

    def panel_edges(self, sigma: float, breakpoints: Sequence[float]=()) -> numpy.ndarray:
        halfwidth = self.halfwidth(sigma)
        count = max(1, int(math.ceil(2 * self.domain_halfwidth)))
        edges = numpy.linspace(-halfwidth, halfwidth, count + 1)
        inner = [b for b in breakpoints if -halfwidth < b < halfwidth]
        return numpy.unique(numpy.concatenate((edges, inner)))


DEFAULT_QUADRATURE = QuadratureSpec()


class IntegrationResult(NamedTuple('IntegrationResult', [('value', float),
                                                         ('error_estimate', float),
                                                         ('tail_bound', float),
                                                         ('tail_correction', float)])):
    """value already includes tail_correction. tail_bound bounds the neglected tail before correction."""
    __slots__ = ()


def _quad_panel(f: Callable[[float], float], a: float, b: float, epsabs: float, epsrel: float, limit: int,
                points: Optional[Sequence[float]]) -> Tuple[float, float, Optional[str]]:
    result = scipy_integrate.quad(lambda x: float(f(x)), a, b, epsabs=epsabs, epsrel=epsrel, limit=limit,
                                  points=points or None, full_output=1)
    value, error = result[0], result[1]
    message = result[3] if len(result) > 3 else None
    return value, error, message


def _estimate_envelope(f: Callable, spec: QuadratureSpec, sigma: float) -> float:
    halfwidth = spec.halfwidth(sigma)
    outer = numpy.linspace(halfwidth - min(sigma, halfwidth), halfwidth, 65)
    samples = numpy.concatenate((outer, -outer))
    values = numpy.abs(numpy.asarray([f(x) for x in samples], dtype=float))
    return float(numpy.max(values * samples ** 2) * math.pi ** 2 / sigma)


def integrate(f: Callable[[float], float],
              spec: QuadratureSpec=DEFAULT_QUADRATURE,
              *,
              sigma: float=1.,
              interval: Optional[Tuple[float, float]]=None,
              breakpoints: Sequence[float]=(),
              tail_envelope: Optional[float]=None,
              tail_mean: float=0.) -> IntegrationResult:
    """Integrate a real function either over the truncated real line or over a finite interval.

    Args:
        f: Real integrand. Must be finite everywhere on the domain (patch removable singularities first).
        spec: Accuracy contract.
        sigma: Length unit of the domain truncation and of the panel width.
        interval: Finite interval. If given, no truncation takes place and the tail bound is zero.
        breakpoints: Points where f is known to vary rapidly. They become panel edges.
        tail_envelope: Envelope coefficient C with |f(x)| <= C*sigma/(pi^2*x^2) outside the domain. Estimated from
            the outermost panel if not given.
        tail_mean: Mean coefficient C' of the tail, f(x) ~ C'*sigma/(pi^2*x^2) averaged over oscillations. If
            non-zero the analytic tail 2*C'/(pi^2*L) is added to the value.

    Raises:
        QuadratureConvergenceError: if a panel exceeds max_subdivisions without reaching the tolerance. The
            exception carries the best estimate.
    """
    if interval is not None:
        a, b = interval
        points = [p for p in breakpoints if a < p < b]
        value, error, message = _quad_panel(f, a, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions, points)
        if message is not None and error > max(spec.abs_tol, spec.rel_tol * abs(value)):
            raise QuadratureConvergenceError(value, error, message)
        return IntegrationResult(value, error, 0., 0.)

    edges = spec.panel_edges(sigma, breakpoints)
    panel_abs_tol = spec.abs_tol / (len(edges) - 1)

    total = 0.
    total_error = 0.
    messages = []  # type: List[str]
    for a, b in zip(edges[:-1], edges[1:]):
        value, error, message = _quad_panel(f, a, b, panel_abs_tol, spec.rel_tol, spec.max_subdivisions, None)
        total += value
        total_error += error
        if message is not None and error > max(panel_abs_tol, spec.rel_tol * abs(value)):
            messages.append('[{:g}, {:g}]: {}'.format(a, b, message))

    if tail_envelope is None:
        tail_envelope = _estimate_envelope(f, spec, sigma)
    tail_bound = spec.tail_bound(tail_envelope)
    tail_correction = spec.tail_bound(tail_mean)
    total += tail_correction

    if messages:
        raise QuadratureConvergenceError(total, total_error, '; '.join(messages))
    if tail_bound > max(spec.abs_tol, spec.rel_tol * abs(total)):
        logger.debug("Tail bound %g exceeds the requested tolerance (value %g, L=%g)",
                     tail_bound, total, spec.domain_halfwidth)
    return IntegrationResult(total, total_error, tail_bound, tail_correction)


def gauss_legendre(order: int, a: float=-1., b: float=1.) -> Tuple[numpy.ndarray, numpy.ndarray]:
    """Gauss-Legendre nodes and weights on [a, b]."""
    nodes, weights = numpy.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    return half * nodes + 0.5 * (a + b), half * weights


class QuadratureConvergenceError(NumericalFailure):
    """QUADPACK did not reach the requested tolerance within max_subdivisions."""

    def __init__(self, best_estimate: float, error_estimate: float, reason: str) -> None:
        super().__init__()
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate
        self.reason = reason

    def __str__(self) -> str:
        return "Quadrature did not converge (best estimate {:.12g} +- {:.3g}): {}".format(
            self.best_estimate, self.error_estimate, self.reason)
