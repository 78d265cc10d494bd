import json
import os
import tempfile
import unittest

from quaperture.cli.config import RunConfig
from quaperture.cli.main import main, build_parser, EXIT_OK, EXIT_CONFIGURATION, EXIT_NUMERIC


class MainTests(unittest.TestCase):
    def setUp(self) -> None:
        self.directory = tempfile.TemporaryDirectory()
        self.out = os.path.join(self.directory.name, 'out')

    def tearDown(self) -> None:
        self.directory.cleanup()

    def _config(self, data: dict) -> str:
        path = os.path.join(self.directory.name, 'run.json')
        with open(path, 'w', encoding='utf-8') as file:
            json.dump(data, file)
        return path

    def _read(self, name: str) -> str:
        with open(os.path.join(self.out, name), encoding='utf-8', newline='') as file:
            return file.read()

    def test_qfi(self) -> None:
        self.assertEqual(main(['qfi', '--out', self.out, '--quiet']), EXIT_OK)
        self.assertEqual(sorted(os.listdir(self.out)), ['qfi.csv', 'qfi.json'])
        header = self._read('qfi.csv').split('\n')[0]
        self.assertEqual(header, '# quaperture-csv qfi/1 config={} seed=0'.format(RunConfig().short_hash))
        summary = json.loads(self._read('qfi.json'))
        self.assertEqual(summary['command'], 'qfi')
        self.assertEqual(summary['config_hash'], RunConfig().config_hash)

    def test_seed_override(self) -> None:
        self.assertEqual(main(['qfi', '--out', self.out, '--seed', '7', '--quiet']), EXIT_OK)
        self.assertTrue(self._read('qfi.csv').split('\n')[0].endswith('seed=7'))
        self.assertEqual(json.loads(self._read('qfi.json'))['seed'], 7)

    def test_deterministic_files(self) -> None:
        config = self._config({'receivers': ['sliver', 'trinary'], 'sweep': {'theta': [0.1, 0.2], 'r': [2]}})
        self.assertEqual(main(['cfi', '--config', config, '--out', self.out, '--quiet']), EXIT_OK)
        first = self._read('cfi.csv'), self._read('cfi.json')
        self.assertEqual(main(['cfi', '--config', config, '--out', self.out, '--quiet']), EXIT_OK)
        self.assertEqual((self._read('cfi.csv'), self._read('cfi.json')), first)
        self.assertEqual(len(first[0].strip().split('\n')), 2 + 4)

    def test_jobs_do_not_change_results(self) -> None:
        config = self._config({'receivers': ['sliver', 'lightpipe'], 'sweep': {'theta': [0.1, 0.2], 'r': [1, 2]}})
        self.assertEqual(main(['cfi', '--config', config, '--out', self.out, '--quiet']), EXIT_OK)
        serial = self._read('cfi.csv')
        self.assertEqual(main(['cfi', '--config', config, '--out', self.out, '--jobs', '2', '--quiet']), EXIT_OK)
        self.assertEqual(self._read('cfi.csv'), serial)

    def test_configuration_errors(self) -> None:
        self.assertEqual(main(['qfi', '--config', self._config({'seed': 'x'}), '--out', self.out, '--quiet']),
                         EXIT_CONFIGURATION)
        self.assertEqual(main(['qfi', '--config', os.path.join(self.directory.name, 'missing.json'), '--quiet']),
                         EXIT_CONFIGURATION)
        blocked = os.path.join(self.directory.name, 'file')
        with open(blocked, 'w') as file:
            file.write('')
        self.assertEqual(main(['qfi', '--out', blocked, '--quiet']), EXIT_CONFIGURATION)

    def test_numeric_failure(self) -> None:
        config = self._config({'scene': {'parametrization': {'#type': 'expression', 'positions': ['-0.3', '0.3'],
                                                             'brightness': ['theta', '1 - theta']}},
                               'sweep': {'theta': [0.5], 'r': [2]},
                               'modes': {'j_max': 0}})
        self.assertEqual(main(['qfi', '--config', config, '--out', self.out, '--quiet']), EXIT_NUMERIC)

    def test_parser(self) -> None:
        parser = build_parser()
        arguments = parser.parse_args(['theta-max', '--jobs', '3', '-v'])
        self.assertEqual(arguments.command, 'theta-max')
        self.assertEqual(arguments.jobs, 3)
        self.assertTrue(arguments.verbose)
        for argv in ([], ['unknown'], ['qfi', '--jobs', '0'], ['qfi', '--seed', '-1'], ['qfi', '-v', '-q']):
            with self.assertRaises(SystemExit, msg=repr(argv)):
                parser.parse_args(argv)
