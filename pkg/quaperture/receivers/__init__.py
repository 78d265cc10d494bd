"""Receivers (measurements on the collected light), their outcome distributions and classical Fisher information.

Multi-axial receivers act on the common image plane (direct imaging, SPADE, SLIVER), co-axial receivers interfere the
apertures in a beam splitter network (groupwise, light pipe, universal co-axial)."""

from quaperture.receivers.distribution import OutcomeDistribution, ContinuousDistribution, CfiResult, \
    cfi_from_distribution, SingularContributionWarning, InvalidDistributionError
from quaperture.receivers.base import Receiver, AmplitudeReceiver, RotatedReceiver, rotate_outputs, \
    output_sectors, is_unitary, BUCKET, UnsupportedScene, NonUnitaryCoefficientsError
from quaperture.receivers.multiaxial import DirectImaging, FullSpade, BinSpade0, BinSpade1, Sliver
from quaperture.receivers.coaxial import pairwise_coefficients, dft_coefficients, block_coefficients, \
    identity_coefficients, Groupwise, TrinarySpade, LightPipe, LightPipeReflected, UniversalCoaxial, \
    universal_coaxial_dist
from quaperture.receivers.closed_forms import direct_imaging_cfi, binspade_cfi, sliver_cfi, groupwise_cfi, \
    trinary_spade_cfi, lightpipe_cfi, truncated_groupwise_closed_form
from quaperture.receivers.theta_max import ThetaMax, theta_max_vs_longbaseline, NoSignChange

__all__ = ["OutcomeDistribution", "ContinuousDistribution", "CfiResult", "cfi_from_distribution",
           "SingularContributionWarning", "InvalidDistributionError",
           "Receiver", "AmplitudeReceiver", "RotatedReceiver", "rotate_outputs", "output_sectors", "is_unitary",
           "BUCKET", "UnsupportedScene", "NonUnitaryCoefficientsError",
           "DirectImaging", "FullSpade", "BinSpade0", "BinSpade1", "Sliver",
           "pairwise_coefficients", "dft_coefficients", "block_coefficients", "identity_coefficients",
           "Groupwise", "TrinarySpade", "LightPipe", "LightPipeReflected", "UniversalCoaxial",
           "universal_coaxial_dist",
           "direct_imaging_cfi", "binspade_cfi", "sliver_cfi", "groupwise_cfi", "trinary_spade_cfi",
           "lightpipe_cfi", "truncated_groupwise_closed_form",
           "ThetaMax", "theta_max_vs_longbaseline", "NoSignChange"]
