"""Sampling of detection records, maximum likelihood estimation and Monte Carlo Cramer-Rao campaigns."""

from quaperture.estimation.sampling import sample_outcomes, sample_positions, kolmogorov_distance, \
    IncompleteDistributionError, SamplingEnvelopeError
from quaperture.estimation.likelihood import log_likelihood, mle_theta, joint_mle_theta, UndefinedEstimate
from quaperture.estimation.protocol import TrialConfig, EstimateRecord, MonteCarloRunner, crb_report, two_stage, \
    sweep_alpha, default_stage_two_receiver

__all__ = ["sample_outcomes", "sample_positions", "kolmogorov_distance", "IncompleteDistributionError",
           "SamplingEnvelopeError", "log_likelihood", "mle_theta", "joint_mle_theta", "UndefinedEstimate",
           "TrialConfig", "EstimateRecord", "MonteCarloRunner", "crb_report", "two_stage", "sweep_alpha",
           "default_stage_two_receiver"]
