"""Entry point of the ``quaperture`` command.

Exit codes: 0 on success, 2 on configuration and validation errors, 3 on numeric failures."""
import argparse
import logging
import sys
from typing import Optional, Sequence

from quaperture.cli import commands
from quaperture.cli.config import RunConfig, load_config
from quaperture.cli.output import ResultWriter
from quaperture.numerics.failures import NumericalFailure
from quaperture.serialization import FilesystemBackend

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_CONFIGURATION", "EXIT_NUMERIC"]


EXIT_OK = 0
EXIT_CONFIGURATION = 2
EXIT_NUMERIC = 3

logger = logging.getLogger("quaperture.cli")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError('seed must be an unsigned 64 bit integer')
    return value


def _jobs(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError('jobs must be positive')
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='JSON run configuration (defaults are used if omitted)')
    common.add_argument('--out', help='output directory (overrides output.directory)')
    common.add_argument('--seed', type=_seed, help='random seed (overrides seed)')
    common.add_argument('--jobs', type=_jobs, default=1, help='worker processes for sweeps and trials')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('--verbose', '-v', action='store_true', help='log debug output')
    verbosity.add_argument('--quiet', '-q', action='store_true', help='log warnings and errors only')

    parser = argparse.ArgumentParser(prog='quaperture',
                                     description='Fisher information of multi-aperture telescope receivers')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    subparsers.add_parser('qfi', parents=[common], help='QFI and its single-aperture/long-baseline split over r')
    subparsers.add_parser('cfi', parents=[common], help='CFI/QFI of all receivers on the (r, theta) grid')
    subparsers.add_parser('theta-max', parents=[common], help='separation below which receivers beat K_lb')
    subparsers.add_parser('simulate', parents=[common], help='Monte Carlo Cramer-Rao campaign')
    subparsers.add_parser('figures', parents=[common], help='CSV data and gnuplot scripts of all figures')
    return parser


def _configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')


def run(command: str, config: RunConfig, jobs: int=1) -> None:
    backend = FilesystemBackend(config.output_directory, create_if_missing=True)
    writer = ResultWriter(backend, config.short_hash, config.seed)
    metadata = dict(config.metadata(), command=command)

    if command == 'qfi':
        result = commands.cmd_qfi(config, jobs, logger)
        writer.write_sweep('qfi.csv', result)
        writer.write_summary('qfi.json', metadata)
    elif command == 'cfi':
        result = commands.cmd_cfi_sweep(config, jobs, logger)
        writer.write_sweep('cfi.csv', result)
        writer.write_summary('cfi.json', metadata)
    elif command == 'theta-max':
        result = commands.cmd_theta_max(config, jobs, logger)
        writer.write_sweep('theta_max.csv', result)
        writer.write_summary('theta_max.json', metadata)
    elif command == 'simulate':
        simulation = commands.cmd_simulate(config, jobs, logger)
        writer.write_sweep('simulate.csv', simulation.estimates)
        writer.write_summary('simulate.json', dict(simulation.summary, command=command))
    elif command == 'figures':
        figures = commands.cmd_figures(config, jobs, logger)
        for figure in figures:
            writer.write_figure(figure)
        writer.write_summary('figures.json', dict(metadata, figures=[figure.name for figure in figures]))
    else:
        raise ValueError('Unknown command', command)
    logger.info("Results written to %s", backend.root)


def main(argv: Optional[Sequence[str]]=None) -> int:
    arguments = build_parser().parse_args(argv)
    _configure_logging(arguments.verbose, arguments.quiet)
    try:
        config = load_config(arguments.config) if arguments.config else RunConfig()
        config = config.with_overrides(seed=arguments.seed, directory=arguments.out)
        run(arguments.command, config, arguments.jobs)
    except NumericalFailure as failure:
        logger.error("%s", failure)
        return EXIT_NUMERIC
    except (ValueError, NotADirectoryError) as error:
        logger.error("%s", error)
        return EXIT_CONFIGURATION
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
