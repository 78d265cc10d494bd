"""Monte Carlo campaigns: empirical Cramer-Rao checks of single receivers and the two-stage adaptive protocol.

In the two-stage protocol the first floor(N^alpha) photons are detected by direct imaging to obtain a preliminary
estimate. The remaining photons are measured with a receiver built for that estimate (for the two-point problem the
pairwise SPADE, which does not depend on it) and the final estimate maximizes the joint likelihood of both records.
"""
import concurrent.futures
import functools
import logging
import math
from typing import Any, Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy

from quaperture.apertures import ApertureArray
from quaperture.estimation.likelihood import mle_theta, joint_mle_theta, UndefinedEstimate
from quaperture.estimation.sampling import sample_outcomes
from quaperture.numerics.random import RngStream
from quaperture.quantum.qfi import qfi_two_point_analytic, qfi_numeric
from quaperture.receivers.base import Receiver
from quaperture.receivers.coaxial import Groupwise
from quaperture.receivers.multiaxial import DirectImaging
from quaperture.scenes import TwoPointParametrization, TwoPointScene

__all__ = ["TrialConfig", "EstimateRecord", "MonteCarloRunner", "crb_report", "two_stage", "sweep_alpha",
           "default_stage_two_receiver", "MIN_REPORT_TRIALS"]


MIN_REPORT_TRIALS = 100
BOOTSTRAP_RESAMPLES = 1000

_TRIAL_KEY = 0
_BOOTSTRAP_KEY = 1


class TrialConfig(NamedTuple('TrialConfig', [('receiver', Receiver),
                                             ('array', ApertureArray),
                                             ('theta_true', float),
                                             ('n_photons', int),
                                             ('n_trials', int),
                                             ('seed', int),
                                             ('stream_id', int),
                                             ('alpha', float),
                                             ('bracket', Optional[Tuple[float, float]])])):
    """One Monte Carlo campaign. theta_true and bracket are in the length unit of the array (sigma based)."""
    __slots__ = ()

    def __new__(cls, receiver: Receiver, array: ApertureArray, theta_true: float, n_photons: int, n_trials: int,
                seed: int=0, stream_id: int=0, alpha: float=0.5, bracket: Optional[Tuple[float, float]]=None):
        if int(n_photons) != n_photons or n_photons < 1:
            raise ValueError('The photon number must be a positive integer', n_photons)
        if int(n_trials) != n_trials or n_trials < 1:
            raise ValueError('At least one trial is required', n_trials)
        if not 0 < alpha < 1:
            raise ValueError('The two-stage exponent alpha must lie in (0, 1)', alpha)
        if not theta_true > 0:
            raise ValueError('theta_true must be positive', theta_true)
        if bracket is not None:
            bracket = (float(bracket[0]), float(bracket[1]))
        return super().__new__(cls, receiver, array, float(theta_true), int(n_photons), int(n_trials), int(seed),
                               int(stream_id), float(alpha), bracket)

    def with_alpha(self, alpha: float) -> 'TrialConfig':
        return TrialConfig(self.receiver, self.array, self.theta_true, self.n_photons, self.n_trials, self.seed,
                           self.stream_id, alpha, self.bracket)

    @property
    def rng(self) -> RngStream:
        return RngStream(self.seed, self.stream_id)

    def trial_rng(self, index: int) -> RngStream:
        return RngStream(self.seed, self.stream_id, spawn_key=(_TRIAL_KEY, index))

    @property
    def bootstrap_rng(self) -> RngStream:
        return RngStream(self.seed, self.stream_id, spawn_key=(_BOOTSTRAP_KEY,))

    @property
    def stage_split(self) -> Tuple[int, int]:
        """Photons of stage one (floor(N^alpha)) and stage two."""
        first = int(math.floor(self.n_photons ** self.alpha))
        return first, self.n_photons - first

    @property
    def scene(self) -> TwoPointScene:
        return TwoPointScene(self.theta_true, self.n_photons)


class EstimateRecord(NamedTuple('EstimateRecord', [('theta_hat', numpy.ndarray),
                                                   ('theta_true', float),
                                                   ('sample_mean', float),
                                                   ('sample_variance', float),
                                                   ('crb', float),
                                                   ('efficiency', float),
                                                   ('efficiency_ci', Tuple[float, float]),
                                                   ('failures', int),
                                                   ('stage_one', Optional[numpy.ndarray])])):
    """Estimates of successful trials and their statistics. efficiency = crb / sample_variance with a bootstrap
    confidence interval; failures counts trials without a defined estimate."""
    __slots__ = ()

    @classmethod
    def from_estimates(cls, estimates: Sequence[float], theta_true: float, crb: float, rng: RngStream,
                       failures: int=0, stage_one: Optional[Sequence[float]]=None,
                       confidence: float=0.95, resamples: int=BOOTSTRAP_RESAMPLES) -> 'EstimateRecord':
        estimates = numpy.asarray(estimates, dtype=float)
        if estimates.size < 2:
            raise UndefinedEstimate(None, 'fewer than two successful trials')
        variance = float(numpy.var(estimates, ddof=1))
        efficiency = crb / variance if variance > 0 else math.inf

        indices = rng.integers(0, estimates.size, size=(resamples, estimates.size))
        variances = numpy.var(estimates[indices], axis=1, ddof=1)
        ratios = crb / variances[variances > 0]
        tail = 50 * (1 - confidence)
        interval = (float(numpy.percentile(ratios, tail)), float(numpy.percentile(ratios, 100 - tail)))
        return cls(estimates, float(theta_true), float(numpy.mean(estimates)), variance, float(crb), efficiency,
                   interval, int(failures), None if stage_one is None else numpy.asarray(stage_one, dtype=float))

    @property
    def n_trials(self) -> int:
        return self.theta_hat.size + self.failures

    @property
    def bias(self) -> float:
        return self.sample_mean - self.theta_true

    @property
    def variance_ratio(self) -> float:
        """sample_variance / crb"""
        return self.sample_variance / self.crb


def default_stage_two_receiver(theta_hat: float) -> Receiver:
    """Pairwise SPADE with a bucket; optimal for every theta of the symmetric two-point problem."""
    return Groupwise('pairwise', j_max=10, with_bucket=True)


def _crb_trial(config: TrialConfig, index: int) -> Optional[float]:
    dist = config.receiver.distribution(config.array, config.scene)
    record = sample_outcomes(dist, config.n_photons, config.trial_rng(index))
    try:
        return mle_theta(record, config.receiver, config.array, config.bracket)
    except UndefinedEstimate:
        return None


def _two_stage_trial(config: TrialConfig, receiver_factory: Callable[[float], Receiver],
                     index: int) -> Optional[Tuple[float, float]]:
    first, second = config.stage_split
    rng = config.trial_rng(index)
    direct = DirectImaging()
    positions = sample_outcomes(direct.distribution(config.array, config.scene), first, rng.substream(0))
    try:
        preliminary = mle_theta(positions, direct, config.array, config.bracket)
    except UndefinedEstimate:
        return None
    receiver = receiver_factory(preliminary)
    counts = sample_outcomes(receiver.distribution(config.array, config.scene), second, rng.substream(1))
    try:
        final = joint_mle_theta([(positions, direct), (counts, receiver)], config.array, config.bracket)
    except UndefinedEstimate:
        return None
    return preliminary, final


class MonteCarloRunner:
    """Runs the trials of a TrialConfig, optionally in a process pool. Trial i always uses the random substream i,
    so results do not depend on the number of jobs."""

    def __init__(self, config: TrialConfig, jobs: int=1, logger: Optional[logging.Logger]=None) -> None:
        if int(jobs) < 1:
            raise ValueError('jobs must be a positive integer', jobs)
        self.config = config
        self.jobs = int(jobs)
        self.logger = logger or logging.getLogger("quaperture.estimation")

    def _map(self, function: Callable[[int], Any]) -> List[Any]:
        indices = range(self.config.n_trials)
        if self.jobs == 1:
            return [function(index) for index in indices]
        with concurrent.futures.ProcessPoolExecutor(max_workers=self.jobs) as executor:
            return list(executor.map(function, indices, chunksize=max(1, self.config.n_trials // (4 * self.jobs))))

    def _failures(self, results: List[Any]) -> int:
        failures = sum(result is None for result in results)
        if failures:
            self.logger.warning("%d of %d trials gave no estimate", failures, len(results))
        return failures

    def crb_report(self) -> EstimateRecord:
        """Empirical variance of the MLE of config.receiver against its own Cramer-Rao bound 1/CFI(theta_true)."""
        config = self.config
        if config.n_trials < MIN_REPORT_TRIALS:
            raise ValueError('A Cramer-Rao report needs at least {} trials'.format(MIN_REPORT_TRIALS),
                             config.n_trials)
        cfi = config.receiver.cfi(config.array, config.scene).value
        self.logger.info("Running %d trials of %r at theta=%g with N=%d (CFI %g)", config.n_trials,
                         config.receiver, config.theta_true, config.n_photons, cfi)
        results = self._map(functools.partial(_crb_trial, config))
        failures = self._failures(results)
        estimates = [result for result in results if result is not None]
        return EstimateRecord.from_estimates(estimates, config.theta_true, 1 / cfi, config.bootstrap_rng, failures)

    def two_stage(self, receiver_factory: Callable[[float], Receiver]=default_stage_two_receiver) -> EstimateRecord:
        """Variance of the two-stage estimate against the quantum bound 1/QFI."""
        config = self.config
        first, second = config.stage_split
        if first < 1 or second < 1:
            raise ValueError('alpha={} splits N={} into empty stages'.format(config.alpha, config.n_photons),
                             (first, second))
        if config.array.is_symmetric:
            qfi = qfi_two_point_analytic(config.array, config.n_photons).total
        else:
            qfi = qfi_numeric(config.array, config.scene, TwoPointParametrization()).total
        self.logger.info("Running %d two-stage trials with %d + %d photons at theta=%g", config.n_trials, first,
                         second, config.theta_true)
        results = self._map(functools.partial(_two_stage_trial, config, receiver_factory))
        failures = self._failures(results)
        successful = [result for result in results if result is not None]
        return EstimateRecord.from_estimates([final for _, final in successful], config.theta_true, 1 / qfi,
                                             config.bootstrap_rng, failures,
                                             stage_one=[preliminary for preliminary, _ in successful])

    def sweep_alpha(self, alphas: Sequence[float],
                    receiver_factory: Callable[[float], Receiver]=default_stage_two_receiver) \
            -> List[Tuple[float, EstimateRecord]]:
        """Two-stage records for every alpha. The best alpha is not selected."""
        configs = [self.config.with_alpha(alpha) for alpha in alphas]
        return [(config.alpha, MonteCarloRunner(config, self.jobs, self.logger).two_stage(receiver_factory))
                for config in configs]


def crb_report(config: TrialConfig, jobs: int=1, logger: Optional[logging.Logger]=None) -> EstimateRecord:
    return MonteCarloRunner(config, jobs, logger).crb_report()


def two_stage(config: TrialConfig, receiver_factory: Callable[[float], Receiver]=default_stage_two_receiver,
              jobs: int=1, logger: Optional[logging.Logger]=None) -> EstimateRecord:
    return MonteCarloRunner(config, jobs, logger).two_stage(receiver_factory)


def sweep_alpha(config: TrialConfig, alphas: Sequence[float],
                receiver_factory: Callable[[float], Receiver]=default_stage_two_receiver,
                jobs: int=1, logger: Optional[logging.Logger]=None) -> List[Tuple[float, EstimateRecord]]:
    return MonteCarloRunner(config, jobs, logger).sweep_alpha(alphas, receiver_factory)
