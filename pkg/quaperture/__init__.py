"""Quantum and classical Fisher information of multi-aperture telescope arrays for sub-Rayleigh parameter
estimation, receiver designs for the two-point problem and Monte Carlo Cramer-Rao checks."""
from quaperture.apertures import ApertureArray, two_aperture, single_aperture, linear_array
from quaperture.scenes import Scene, TwoPointScene

__version__ = '0.1'
__all__ = ["ApertureArray", "two_aperture", "single_aperture", "linear_array", "Scene", "TwoPointScene"]
