"""Conversion between physical telescope descriptions and the internal sigma units.

Internally every length is measured in units of the Rayleigh scale, i.e. sigma = 1 and the aperture width is
delta = 2 pi. For a telescope of aperture diameter d observing at wavelength lambda the Rayleigh scale is the angle
sigma = 2 pi lambda / d.
"""
import math
from typing import Any, Dict, NamedTuple, Sequence

from quaperture.apertures import ApertureArray

__all__ = ["RAD_TO_MAS", "UnitConversion", "rayleigh_scale_rad", "rayleigh_scale_mas", "physical_conversion",
           "physical_array", "baseline_ratio", "single_aperture_fraction", "percent_mse_reduction"]

#: milliarcseconds per radian
RAD_TO_MAS = 180 / math.pi * 3600 * 1000

_MICROMETRE = 1e-6


def rayleigh_scale_rad(diameter_m: float, wavelength_um: float) -> float:
    if not diameter_m > 0 or not wavelength_um > 0:
        raise ValueError('Diameter and wavelength must be positive', diameter_m, wavelength_um)
    return 2 * math.pi * wavelength_um * _MICROMETRE / diameter_m


def rayleigh_scale_mas(diameter_m: float, wavelength_um: float) -> float:
    return rayleigh_scale_rad(diameter_m, wavelength_um) * RAD_TO_MAS


def baseline_ratio(baseline_m: float, diameter_m: float) -> float:
    """r = centre to centre distance over aperture diameter"""
    return baseline_m / diameter_m


class UnitConversion(NamedTuple('UnitConversion', [('diameter_m', float),
                                                   ('wavelength_um', float),
                                                   ('sigma_rad', float),
                                                   ('sigma_mas', float)])):
    """Record of a physical to sigma unit conversion. Written into output metadata."""
    __slots__ = ()

    formula = 'sigma = 2*pi*wavelength/diameter'

    def mas_to_sigma(self, angle_mas: float) -> float:
        return angle_mas / self.sigma_mas

    def sigma_to_mas(self, angle_sigma: float) -> float:
        return angle_sigma * self.sigma_mas

    def as_dict(self) -> Dict[str, Any]:
        data = dict(self._asdict())
        data['formula'] = self.formula
        return data


def physical_conversion(diameter_m: float, wavelength_um: float) -> UnitConversion:
    sigma_rad = rayleigh_scale_rad(diameter_m, wavelength_um)
    return UnitConversion(float(diameter_m), float(wavelength_um), sigma_rad, sigma_rad * RAD_TO_MAS)


def physical_array(centres_m: Sequence[float], diameter_m: float) -> ApertureArray:
    """Aperture array in sigma units from aperture centres and the common diameter in metres."""
    delta = 2 * math.pi
    return ApertureArray([delta * c / diameter_m for c in centres_m], delta)


def single_aperture_fraction(array: ApertureArray) -> float:
    """K_1ap / K_total of the two-point QFI, (delta^2/12) / Delta k^2."""
    return (array.delta ** 2 / 12) / array.momentum_variance


def percent_mse_reduction(array: ApertureArray) -> float:
    """Percentage by which the single-aperture term lowers the attainable mean squared error compared to the long
    baseline term alone: 100 K_1ap / K_total."""
    return 100 * single_aperture_fraction(array)
