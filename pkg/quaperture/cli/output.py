"""Result files: versioned CSV tables, JSON summaries and gnuplot scripts, written through a storage backend.

Every file embeds the configuration hash and the seed. Files contain no timestamps, so re-running a configuration
reproduces them byte by byte."""
import csv
import io
import math
import numbers
from typing import Any, Dict, Iterable, Sequence

import quaperture
from quaperture.cli.commands import FigureData, SweepResult
from quaperture.serialization import StorageBackend, dumps

__all__ = ["CSV_SCHEMA_VERSION", "format_value", "render_csv", "render_summary", "render_gnuplot", "ResultWriter"]


CSV_SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 12


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        return '{:.{}g}'.format(value, SIGNIFICANT_DIGITS)
    return str(value)


def render_csv(schema: str, columns: Sequence[str], rows: Iterable[Sequence[Any]], config_hash: str,
               seed: int) -> str:
    """First line ``# quaperture-csv <schema>/<version> config=<hash> seed=<seed>``, then the header row."""
    buffer = io.StringIO()
    buffer.write('# quaperture-csv {}/{} config={} seed={}\n'.format(schema, CSV_SCHEMA_VERSION, config_hash, seed))
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def render_summary(data: Dict[str, Any]) -> str:
    summary = dict(data)
    summary['version'] = quaperture.__version__
    return dumps(summary, indent=2) + '\n'


def render_gnuplot(figure: FigureData, config_hash: str, seed: int) -> str:
    """Plot script for the wide table figure.name + '.csv'. Column 1 is the abscissa."""
    curves = len(figure.columns) - 1
    lines = ['# quaperture figure {} config={} seed={}'.format(figure.name, config_hash, seed),
             "set datafile separator ','",
             'set key autotitle columnhead',
             "set xlabel '{}'".format(figure.xlabel),
             "set ylabel '{}'".format(figure.ylabel),
             'set terminal pngcairo size 800,600',
             "set output '{}.png'".format(figure.name),
             "plot for [i=2:{}] '{}.csv' using 1:i with lines".format(curves + 1, figure.name)]
    return '\n'.join(lines) + '\n'


class ResultWriter:
    """Collects the files of one command and writes them to the backend. Existing files are replaced."""

    def __init__(self, backend: StorageBackend, config_hash: str, seed: int) -> None:
        self.backend = backend
        self.config_hash = config_hash
        self.seed = seed

    def _put(self, identifier: str, data: str) -> None:
        self.backend.put(identifier, data, overwrite=True)

    def write_sweep(self, identifier: str, result: SweepResult) -> None:
        self._put(identifier, render_csv(result.schema, result.columns, result.rows, self.config_hash, self.seed))

    def write_summary(self, identifier: str, data: Dict[str, Any]) -> None:
        self._put(identifier, render_summary(data))

    def write_figure(self, figure: FigureData) -> None:
        self._put(figure.name + '.csv', render_csv(figure.name, figure.columns, figure.rows, self.config_hash,
                                                   self.seed))
        self._put(figure.name + '.gp', render_gnuplot(figure, self.config_hash, self.seed))
