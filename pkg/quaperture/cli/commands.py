"""Commands of the quaperture command line interface. Every command evaluates a RunConfig into a SweepResult (or
Monte Carlo records) without touching the filesystem; writing is done by quaperture.cli.output."""
import concurrent.futures
import logging
import math
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

from quaperture.apertures import ApertureArray, two_aperture
from quaperture.cli.config import RunConfig
from quaperture.estimation.protocol import EstimateRecord, MonteCarloRunner, TrialConfig
from quaperture.numerics.failures import NumericalFailure
from quaperture.quantum.qfi import QfiResult, qfi_numeric, qfi_two_point_analytic
from quaperture.receivers.base import Receiver
from quaperture.receivers.multiaxial import BinSpade0, BinSpade1, DirectImaging, FullSpade, Sliver
from quaperture.receivers.theta_max import NoSignChange, theta_max_vs_longbaseline
from quaperture.scenes import SceneParametrization
from quaperture.units import percent_mse_reduction

__all__ = ["SweepResult", "SimulationResult", "cmd_qfi", "cmd_cfi_sweep", "cmd_theta_max", "cmd_simulate",
           "cmd_figures", "is_multiaxial", "QuantumOrderingViolation", "ORDERING_TOLERANCE"]


#: relative tolerance of CFI <= QFI
ORDERING_TOLERANCE = 1e-6

_MULTIAXIAL = (DirectImaging, FullSpade, BinSpade0, BinSpade1, Sliver)


def is_multiaxial(receiver: Receiver) -> bool:
    """Multi-axial receivers act on the common image plane; all others are co-axial networks."""
    return isinstance(receiver, _MULTIAXIAL)


class SweepResult(NamedTuple('SweepResult', [('schema', str),
                                             ('columns', Tuple[str, ...]),
                                             ('rows', List[Tuple[Any, ...]]),
                                             ('metadata', Dict[str, Any])])):
    """Tabular command result. Rows are stored sorted by the leading key columns of the schema."""
    __slots__ = ()

    def column(self, name: str) -> List[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]

    def select(self, **criteria: Any) -> 'SweepResult':
        """Rows whose columns equal the given values."""
        indices = [(self.columns.index(name), value) for name, value in criteria.items()]
        rows = [row for row in self.rows if all(row[i] == value for i, value in indices)]
        return self._replace(rows=rows)


class SimulationResult(NamedTuple('SimulationResult', [('records', List[Tuple[Optional[float], EstimateRecord]]),
                                                       ('estimates', SweepResult),
                                                       ('summary', Dict[str, Any])])):
    __slots__ = ()


def _run(function: Callable[[Any], Any], tasks: Sequence[Any], jobs: int) -> List[Any]:
    if jobs <= 1 or len(tasks) <= 1:
        return [function(task) for task in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(function, tasks))


def _qfi(array: ApertureArray, theta: float, n_photons: float, parametrization: SceneParametrization,
         config: RunConfig) -> QfiResult:
    if parametrization.is_two_point and array.is_symmetric:
        return qfi_two_point_analytic(array, n_photons)
    return qfi_numeric(array, parametrization.scene(theta, n_photons), parametrization, config.j_max,
                       method=config.eig_method, truncation_tolerance=config.truncation_tolerance,
                       allow_truncation=config.allow_truncation)


def _sort_key(row: Tuple[Any, ...]) -> Tuple[Any, ...]:
    return tuple(-math.inf if isinstance(value, float) and math.isnan(value) else value for value in row)


def cmd_qfi(config: RunConfig, jobs: int=1, logger: Optional[logging.Logger]=None) -> SweepResult:
    """QFI with its single-aperture and long-baseline split over the r grid.

    For the symmetric two-point problem the QFI does not depend on theta and one row per r is emitted (schema
    "qfi"). Other problems are evaluated numerically on the theta grid (schema "qfi-theta")."""
    logger = logger or logging.getLogger("quaperture.cli")
    parametrization = config.parametrization
    arrays = config.arrays()
    if parametrization.is_two_point and all(array.is_symmetric for _, array in arrays):
        rows = []
        for r, array in arrays:
            result = qfi_two_point_analytic(array, config.n_photons)
            rows.append((r, result.total, result.k_1ap, result.k_lb, result.single_aperture_fraction))
        logger.info("Analytic QFI for %d arrays", len(rows))
        return SweepResult('qfi', ('r', 'K_total', 'K_1ap', 'K_lb', 'single_aperture_fraction'),
                           sorted(rows, key=_sort_key), config.metadata())

    tasks = [(r, array, theta, config) for r, array in arrays for theta in config.theta_grid]
    logger.info("Numeric QFI at %d grid points", len(tasks))
    rows = _run(_qfi_point, tasks, jobs)
    return SweepResult('qfi-theta', ('r', 'theta', 'K_total', 'K_1ap', 'K_lb'), sorted(rows, key=_sort_key),
                       config.metadata())


def _qfi_point(task: Tuple[float, ApertureArray, float, RunConfig]) -> Tuple[float, ...]:
    r, array, theta, config = task
    result = _qfi(array, theta, config.n_photons, config.parametrization, config)
    nan = math.nan
    return (r, theta, result.total, nan if result.k_1ap is None else result.k_1ap,
            nan if result.k_lb is None else result.k_lb)


def _cfi_point(task: Tuple[Receiver, float, ApertureArray, float, RunConfig]) -> Tuple[Any, ...]:
    receiver, r, array, theta, config = task
    parametrization = config.parametrization
    scene = parametrization.scene(theta, config.n_photons)
    cfi = receiver.cfi(array, scene, parametrization, quadrature=config.quadrature).value
    qfi = _qfi(array, theta, config.n_photons, parametrization, config)
    ratio = cfi / qfi.total if qfi.total > 0 else math.nan
    if ratio > 1 + ORDERING_TOLERANCE:
        raise QuantumOrderingViolation(receiver, r, theta, cfi, qfi.total)
    nan = math.nan
    return (receiver.name, r, theta, cfi, qfi.total, ratio, nan if qfi.k_1ap is None else qfi.k_1ap,
            nan if qfi.k_lb is None else qfi.k_lb)


CFI_COLUMNS = ('receiver', 'r', 'theta', 'CFI', 'QFI', 'CFI_over_QFI', 'K_1ap', 'K_lb')


def cmd_cfi_sweep(config: RunConfig, jobs: int=1, logger: Optional[logging.Logger]=None,
                  receivers: Optional[Sequence[Receiver]]=None) -> SweepResult:
    """CFI of every receiver normalized to the QFI on the (r, theta) grid, rows sorted by (receiver, r, theta)."""
    logger = logger or logging.getLogger("quaperture.cli")
    receivers = config.receivers if receivers is None else receivers
    tasks = [(receiver, r, array, theta, config)
             for receiver in receivers for r, array in config.arrays() for theta in config.theta_grid]
    logger.info("Evaluating the CFI of %d receivers at %d grid points", len(receivers), len(tasks))
    rows = _run(_cfi_point, tasks, jobs)
    return SweepResult('cfi', CFI_COLUMNS, sorted(rows, key=_sort_key), config.metadata())


def _theta_max_point(task: Tuple[Receiver, float, RunConfig]) -> Tuple[Any, ...]:
    receiver, r, config = task
    try:
        result = theta_max_vs_longbaseline(receiver, r, config.theta_max_bracket, grid=config.theta_max_grid)
    except NoSignChange as no_root:
        logging.getLogger("quaperture.cli").info("%s", no_root)
        return receiver.name, r, math.nan, 'no-root'
    return receiver.name, r, result.theta_max, 'degenerate' if result.degenerate else 'root'


def cmd_theta_max(config: RunConfig, jobs: int=1, logger: Optional[logging.Logger]=None,
                  receivers: Optional[Sequence[Receiver]]=None) -> SweepResult:
    """theta_max (in sigma) of every receiver over the r grid of two aperture arrays. The status column is "root",
    "degenerate" (CFI identical to K_lb) or "no-root" (no sign change on the bracket)."""
    logger = logger or logging.getLogger("quaperture.cli")
    receivers = config.receivers if receivers is None else receivers
    tasks = [(receiver, r, config) for receiver in receivers for r in config.two_aperture_ratios()]
    logger.info("Searching theta_max for %d (receiver, r) pairs", len(tasks))
    rows = _run(_theta_max_point, tasks, jobs)
    return SweepResult('theta-max', ('receiver', 'r', 'theta_max', 'status'), sorted(rows, key=_sort_key),
                       config.metadata())


def _record_summary(record: EstimateRecord) -> Dict[str, Any]:
    return {'theta_true': record.theta_true,
            'sample_mean': record.sample_mean,
            'sample_variance': record.sample_variance,
            'crb': record.crb,
            'efficiency': record.efficiency,
            'efficiency_ci': list(record.efficiency_ci),
            'successful_trials': int(record.theta_hat.size),
            'failed_trials': record.failures}


def cmd_simulate(config: RunConfig, jobs: int=1, logger: Optional[logging.Logger]=None) -> SimulationResult:
    """Monte Carlo campaign of the simulation section.

    Mode "crb" compares the MLE variance of the simulation receiver with its own Cramer-Rao bound. Mode
    "two_stage" runs the two-stage protocol at alpha or at every entry of alphas and compares with 1/QFI."""
    logger = logger or logging.getLogger("quaperture.cli")
    trial_config = TrialConfig(config.simulation_receiver, config.array, config.theta_true,
                               config.simulation_photons, config.n_trials, config.seed, config.stream_id,
                               config.alpha, config.simulation_bracket)
    runner = MonteCarloRunner(trial_config, jobs, logger.getChild('simulate'))

    if config.simulation_mode == 'crb':
        records = [(None, runner.crb_report())]  # type: List[Tuple[Optional[float], EstimateRecord]]
        columns = ('receiver', 'estimate', 'theta_hat')
        name = trial_config.receiver.name
        rows = [(name, i, float(theta_hat)) for i, theta_hat in enumerate(records[0][1].theta_hat)]
        schema = 'mc-crb'
    else:
        alphas = config.alphas if config.alphas is not None else [config.alpha]
        records = list(runner.sweep_alpha(alphas))
        columns = ('alpha', 'estimate', 'theta_hat_stage_one', 'theta_hat')
        rows = [(alpha, i, float(first), float(final))
                for alpha, record in records
                for i, (first, final) in enumerate(zip(record.stage_one, record.theta_hat))]
        schema = 'mc-two-stage'

    summary = dict(config.metadata())
    summary.update({'mode': config.simulation_mode,
                    'receiver': trial_config.receiver.name if config.simulation_mode == 'crb' else 'two_stage',
                    'n_photons': trial_config.n_photons,
                    'n_trials': trial_config.n_trials,
                    'records': [dict(_record_summary(record), alpha=alpha) for alpha, record in records]})
    for alpha, record in records:
        logger.info("alpha=%s: variance %g, bound %g, efficiency %.3f [%.3f, %.3f]", alpha, record.sample_variance,
                    record.crb, record.efficiency, *record.efficiency_ci)
    return SimulationResult(records, SweepResult(schema, columns, rows, config.metadata()), summary)


class FigureData(NamedTuple('FigureData', [('name', str),
                                           ('columns', Tuple[str, ...]),
                                           ('rows', List[Tuple[Any, ...]]),
                                           ('xlabel', str),
                                           ('ylabel', str)])):
    """One figure as a wide table: the first column is the abscissa, every further column one curve."""
    __slots__ = ()


def _pivot(sweep: SweepResult, r: float, value: str) -> Tuple[Tuple[str, ...], List[Tuple[Any, ...]]]:
    selected = sweep.select(r=r)
    names = sorted(set(selected.column('receiver')))
    table = {}  # type: Dict[float, Dict[str, float]]
    for receiver, theta, y in zip(selected.column('receiver'), selected.column('theta'), selected.column(value)):
        table.setdefault(theta, {})[receiver] = y
    rows = [(theta,) + tuple(table[theta].get(name, math.nan) for name in names) for theta in sorted(table)]
    return ('theta',) + tuple(names), rows


def cmd_figures(config: RunConfig, jobs: int=1, logger: Optional[logging.Logger]=None) -> List[FigureData]:
    """Data of the standard comparison figures:

    * qfi_split: QFI and its split over r
    * cfi_multiaxial_r{r}: CFI/QFI of multi-axial receivers over theta
    * cfi_coaxial_r{r}: CFI/QFI of co-axial receivers over theta
    * mse_reduction: percentage reduction of the mean squared error due to the single-aperture term over r
    * theta_max_over_r: theta_max of the co-axial receivers over r
    """
    logger = logger or logging.getLogger("quaperture.cli")
    figures = []

    qfi = cmd_qfi(config, jobs, logger)
    if qfi.schema != 'qfi':
        raise ValueError('Figures need the symmetric two-point problem', config.parametrization)
    figures.append(FigureData('qfi_split', ('r', 'K_total', 'K_1ap', 'K_lb'), [row[:4] for row in qfi.rows],
                              'r', 'QFI'))

    sweep = cmd_cfi_sweep(config, jobs, logger)
    multiaxial = [receiver for receiver in config.receivers if is_multiaxial(receiver)]
    coaxial = [receiver for receiver in config.receivers if not is_multiaxial(receiver)]
    for prefix, group in (('cfi_multiaxial', multiaxial), ('cfi_coaxial', coaxial)):
        names = {receiver.name for receiver in group}
        if not names:
            continue
        group_sweep = sweep._replace(rows=[row for row in sweep.rows if row[0] in names])
        for r, _ in config.arrays():
            columns, rows = _pivot(group_sweep, r, 'CFI_over_QFI')
            figures.append(FigureData('{}_r{:g}'.format(prefix, r), columns, rows, 'theta / sigma', 'CFI / QFI'))

    figures.append(FigureData('mse_reduction', ('r', 'percent_mse_reduction'),
                              [(r, percent_mse_reduction(two_aperture(r))) for r in config.two_aperture_ratios()],
                              'r', 'reduction in MSE / %'))

    if coaxial:
        theta_max = cmd_theta_max(config, jobs, logger, receivers=coaxial)
        names = sorted({receiver.name for receiver in coaxial})
        table = {}  # type: Dict[float, Dict[str, float]]
        for receiver, r, value in zip(theta_max.column('receiver'), theta_max.column('r'),
                                      theta_max.column('theta_max')):
            table.setdefault(r, {})[receiver] = value
        rows = [(r,) + tuple(table[r].get(name, math.nan) for name in names) for r in sorted(table)]
        figures.append(FigureData('theta_max_over_r', ('r',) + tuple(names), rows, 'r', 'theta_max / sigma'))
    logger.info("Prepared %d figures", len(figures))
    return figures


class QuantumOrderingViolation(NumericalFailure):
    """A classical Fisher information exceeds the quantum Fisher information."""

    def __init__(self, receiver: Receiver, r: float, theta: float, cfi: float, qfi: float) -> None:
        super().__init__()
        self.receiver = receiver
        self.r = r
        self.theta = theta
        self.cfi = cfi
        self.qfi = qfi

    def __str__(self) -> str:
        return "CFI {:.12g} of {!r} exceeds the QFI {:.12g} at r={}, theta={}".format(
            self.cfi, self.receiver, self.qfi, self.r, self.theta)
