import json
import math
import unittest

import numpy

import quaperture
from quaperture.cli.commands import FigureData, SweepResult
from quaperture.cli.output import format_value, render_csv, render_summary, render_gnuplot, ResultWriter,\
    CSV_SCHEMA_VERSION
from quaperture.serialization import DictBackend


class FormatValueTests(unittest.TestCase):
    def test_values(self) -> None:
        self.assertEqual(format_value(True), 'true')
        self.assertEqual(format_value(3), '3')
        self.assertEqual(format_value(numpy.int64(-2)), '-2')
        self.assertEqual(format_value(0.1), '0.1')
        self.assertEqual(format_value(1 / 3), '0.333333333333')
        self.assertEqual(format_value(numpy.float64(2.5e-20)), '2.5e-20')
        self.assertEqual(format_value(math.nan), 'nan')
        self.assertEqual(format_value(math.inf), 'inf')
        self.assertEqual(format_value('no-root'), 'no-root')


class RenderTests(unittest.TestCase):
    def test_csv(self) -> None:
        text = render_csv('cfi', ('receiver', 'r', 'CFI'), [('sliver', 2., 1 / 3), ('trinary', 2., math.nan)],
                          'abc123', 7)
        lines = text.split('\n')
        self.assertEqual(lines[0], '# quaperture-csv cfi/{} config=abc123 seed=7'.format(CSV_SCHEMA_VERSION))
        self.assertEqual(lines[1], 'receiver,r,CFI')
        self.assertEqual(lines[2], 'sliver,2,0.333333333333')
        self.assertEqual(lines[3], 'trinary,2,nan')
        self.assertEqual(lines[4], '')

    def test_summary(self) -> None:
        text = render_summary({'seed': 3, 'config_hash': 'abc'})
        self.assertTrue(text.endswith('\n'))
        data = json.loads(text)
        self.assertEqual(data, {'seed': 3, 'config_hash': 'abc', 'version': quaperture.__version__})
        self.assertLess(text.index('config_hash'), text.index('seed'))

    def test_gnuplot(self) -> None:
        figure = FigureData('cfi_coaxial_r2', ('theta', 'lightpipe', 'trinary'), [(0.1, 1., 0.9)],
                            'theta / sigma', 'CFI / QFI')
        script = render_gnuplot(figure, 'abc', 0)
        self.assertIn('# quaperture figure cfi_coaxial_r2 config=abc seed=0', script)
        self.assertIn("set output 'cfi_coaxial_r2.png'", script)
        self.assertIn("plot for [i=2:3] 'cfi_coaxial_r2.csv' using 1:i with lines", script)
        self.assertIn("set xlabel 'theta / sigma'", script)


class ResultWriterTests(unittest.TestCase):
    def setUp(self) -> None:
        self.backend = DictBackend()
        self.writer = ResultWriter(self.backend, 'hash', 5)

    def test_sweep_overwrites(self) -> None:
        result = SweepResult('qfi', ('r', 'K_total'), [(1., 2.)], {})
        self.writer.write_sweep('qfi.csv', result)
        self.writer.write_sweep('qfi.csv', result._replace(rows=[(1., 3.)]))
        self.assertTrue(self.backend.get('qfi.csv').endswith('1,3\n'))

    def test_figure(self) -> None:
        figure = FigureData('mse_reduction', ('r', 'percent_mse_reduction'), [(2., 7.7)], 'r', '%')
        self.writer.write_figure(figure)
        self.assertEqual(set(self.backend.storage), {'mse_reduction.csv', 'mse_reduction.gp'})
        self.assertTrue(self.backend.get('mse_reduction.csv').startswith(
            '# quaperture-csv mse_reduction/{} config=hash seed=5\n'.format(CSV_SCHEMA_VERSION)))
