import csv
import json
import os
import unittest
from contextlib import redirect_stdout
from io import StringIO
from pathlib import Path
from tempfile import TemporaryDirectory
from unittest import mock

from CloudHarvestCorePluginManager.registry import Registry

from EquilibriumPricing.cli import build_parser, parse_arguments, run
from EquilibriumPricing.pricing import CallContract, MarketParams, equilibrium_price


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.directory = TemporaryDirectory()
        self.path = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def run_json(self, *argv: str):
        out = self.path / 'out.json'
        code = run([*argv, '--out', str(out)])

        return code, json.loads(out.read_text()) if out.exists() else None


class TestCommands(CliTestCase):
    def test_price_eq_matches_library(self):
        code, records = self.run_json('price-eq', '--target-p', '0.5', '--mu', '0.25', '--strike', '90')

        m = MarketParams(s0=100.0, mu=0.25, sigma=0.1, r=0.05, day_count=365)
        quote = equilibrium_price(m, CallContract.from_days(90.0, 60.0, 365), 0.5)

        self.assertEqual(code, 0)
        self.assertEqual(records[0]['status'], 'priced')
        self.assertEqual(records[0]['value'], quote.value)

    def test_clamped_and_infeasible(self):
        _, clamped = self.run_json('price-eq', '--target-p', '0.5', '--mu', '0.25', '--strike', '104')
        _, infeasible = self.run_json('price-eq', '--target-p', '0.5', '--mu', '0.25', '--strike', '110')

        self.assertEqual(clamped[0]['status'], 'clamped-lower')
        self.assertEqual(clamped[0]['value'], 0.0)
        self.assertEqual(infeasible[0]['status'], 'infeasible')
        self.assertIsNone(infeasible[0]['value'])

    def test_prob(self):
        code, records = self.run_json('prob', '--mu', '0.005', '--premium', '0')

        self.assertEqual(code, 0)
        self.assertAlmostEqual(records[0]['p'], 0.25, places=12)

    def test_csv_and_json_agree(self):
        csv_out = self.path / 'quote.csv'

        self.assertEqual(run(['price-eq', '--target-p', '0.2', '--mu', '0.1', '--strike', '96', '--out', str(csv_out)]),
                         0)
        _, records = self.run_json('price-eq', '--target-p', '0.2', '--mu', '0.1', '--strike', '96')

        with open(csv_out, newline='') as file:
            rows = list(csv.DictReader(file))

        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0]['status'], records[0]['status'])

        for key in ('value', 'raw_value', 'exercise_p', 'K'):
            self.assertEqual(float(rows[0][key]), records[0][key])

    def test_stdout(self):
        buffer = StringIO()

        with redirect_stdout(buffer):
            code = run(['price-bs', '--format', 'json'])

        self.assertEqual(code, 0)
        self.assertEqual(json.loads(buffer.getvalue())[0]['K'], 100.0)

    def test_table_is_deterministic(self):
        outputs = []

        for workers in ('1', '1', '3'):
            out = self.path / f'table-{len(outputs)}.csv'
            code = run(['table', '--mu-axis', 'mu=-0.05:0.05:0.02', '--no-report', '--workers', workers,
                        '--out', str(out)])

            self.assertEqual(code, 0)
            outputs.append(out.read_bytes())

        self.assertEqual(outputs[0], outputs[1])
        self.assertEqual(outputs[0], outputs[2])
        self.assertNotIn(b'\r\n', outputs[0])

    def test_table_report(self):
        report = self.path / 'report.txt'
        code = run(['table', '--mu-axis', 'mu=0.21:0.25:0.02', '--layout', 'wide', '--report', str(report),
                    '--out', str(self.path / 'table.csv')])

        self.assertEqual(code, 0)
        self.assertTrue(report.read_text().startswith('Discrepancy report for C(20%)'))

        with open(self.path / 'table.csv', newline='') as file:
            rows = list(csv.DictReader(file))

        self.assertEqual(rows[0]['mu'], 'BS')
        self.assertEqual(rows[-1]['112.00'], 'NaN')

    def test_scan(self):
        code, records = self.run_json('scan', '--axis', 'K=90:110:10', '--axis', 'mu=-0.1:0.1:0.1', '--threshold', '0.3')

        self.assertEqual(code, 0)
        self.assertTrue(all(record['p_of_bs'] > 0.3 for record in records))

    def test_mc_check(self):
        code, records = self.run_json('mc-check', '--configs', '2', '--paths', '20000')

        self.assertEqual(len(records), 10)
        self.assertEqual(code, 0 if all(record['passed'] for record in records) else 1)

    def test_chain(self):
        chain_file = self.path / 'chain.yaml'
        chain_file.write_text('chain:\n'
                              '  tasks:\n'
                              '    - price-eq:\n'
                              '        target_p: {{ p }}\n'
                              '        strike: {{ strike }}\n'
                              '        day_count: {{ day_count }}\n')

        code, records = self.run_json('chain', str(chain_file), '--var', 'p=0.5', '--day-count', '252')

        self.assertEqual(code, 0)
        self.assertEqual(records[0]['K'], 100.0)
        self.assertEqual(records[0]['day_count'], 252)


class TestExitCodes(CliTestCase):
    def test_help(self):
        with redirect_stdout(StringIO()):
            self.assertEqual(run(['--help']), 0)

    def test_usage_errors(self):
        for argv in ([], ['no-such-command'], ['price-bs', '--no-such-flag'], ['price-eq'],
                     ['prob'], ['prob', '--premium', '1', '--use-bs'], ['price-bs', '--day-count', '300'],
                     ['scan', '--preset', 'rate', '--axis', 'K=90:110:10']):
            self.assertEqual(run(argv), 64, argv)

    def test_domain_errors(self):
        self.assertEqual(run(['price-eq', '--target-p', '1.5']), 2)
        self.assertEqual(run(['prob', '--premium', '-1']), 2)
        self.assertEqual(run(['implied-vol', '--price', '150']), 2)
        self.assertEqual(run(['price-bs', '--sigma', '0']), 2)

    def test_configuration_errors(self):
        self.assertEqual(run(['scan', '--axis', 'K=110:90:10']), 64)
        self.assertEqual(run(['price-bs', '--config', str(self.path / 'missing.ini')]), 64)

    def test_convergence_error(self):
        chain_file = self.path / 'chain.yaml'
        chain_file.write_text('chain:\n  tasks:\n    - test-not-converging: {}\n')

        from . import test_tasks_base  # registers test-not-converging

        self.assertIs(Registry.find(result_key='cls', name='test-not-converging', category='task')[0],
                      test_tasks_base.NotConvergingTask)
        self.assertEqual(run(['chain', str(chain_file)]), 3)

    def test_oracle_failure(self):
        chain_file = self.path / 'chain.yaml'
        chain_file.write_text('oracle:\n'
                              '  tasks:\n'
                              '    - oracle-check:\n'
                              '        checks: [exercise-probability]\n'
                              '        configs: 1\n'
                              '        paths: {{ paths }}\n'
                              '        tolerance: -1\n')

        code, records = self.run_json('chain', str(chain_file), '--paths', '1000')

        self.assertEqual(code, 1)
        self.assertFalse(records[0]['passed'])


class TestConfiguration(CliTestCase):
    def ttm_years(self, *argv: str) -> float:
        code, records = self.run_json('price-bs', *argv)

        self.assertEqual(code, 0)

        return records[0]['ttm_years']

    def test_config_file(self):
        config = self.path / 'eqp.ini'
        config.write_text('day-count = 252\nttm-days = 59\n')

        self.assertEqual(self.ttm_years('--config', str(config)), 59 / 252)
        self.assertEqual(self.ttm_years('--config', str(config), '--ttm-days', '63'), 63 / 252)

    def test_yaml_config_file(self):
        config = self.path / 'eqp.yaml'
        config.write_text('day_count: 360\nttm_days: 90\n')

        self.assertEqual(self.ttm_years('--config', str(config)), 0.25)

    def test_unknown_config_key(self):
        config = self.path / 'eqp.yaml'
        config.write_text('rho: 0.3\n')

        self.assertEqual(run(['price-bs', '--config', str(config)]), 64)

    def test_config_file_flags(self):
        config = self.path / 'eqp.ini'

        config.write_text('no-report = false\nverbose = 2\n')
        args = parse_arguments(['table', '--config', str(config)])
        self.assertIs(args.no_report, False)
        self.assertEqual(args.verbose, 2)

        config.write_text('no-report = yes\n')
        self.assertIs(parse_arguments(['table', '--config', str(config)]).no_report, True)

        config.write_text('no-report = sometimes\n')
        self.assertEqual(run(['table', '--config', str(config)]), 64)

    def test_config_file_use_bs_false(self):
        config = self.path / 'eqp.ini'
        config.write_text('use-bs = false\n')

        self.assertIs(parse_arguments(['prob', '--config', str(config)]).use_bs, False)

        code, records = self.run_json('prob', '--premium', '1', '--config', str(config))
        self.assertEqual(code, 0)
        self.assertEqual(len(records), 1)

    def test_yaml_config_file_flags(self):
        config = self.path / 'eqp.yaml'
        config.write_text('no_report: true\n')

        self.assertIs(parse_arguments(['table', '--config', str(config)]).no_report, True)

    def test_environment(self):
        config = self.path / 'eqp.ini'
        config.write_text('day-count = 360\n')

        with mock.patch.dict(os.environ, {'EQP_DAY_COUNT': '252'}):
            self.assertEqual(self.ttm_years(), 60 / 252)
            self.assertEqual(self.ttm_years('--config', str(config)), 60 / 360)
            self.assertEqual(self.ttm_years('--day-count', '366'), 60 / 366)

        with mock.patch.dict(os.environ, {'EQP_DAY_COUNT': '300'}):
            self.assertEqual(run(['price-bs']), 64)

    def test_parser_defaults(self):
        parser, commands = build_parser()

        self.assertEqual(set(commands), {'price-bs', 'prob', 'price-eq', 'implied-vol', 'table', 'scan', 'surface',
                                         'convention-search', 'mc-check', 'chain'})
        self.assertEqual(parser.parse_args(['price-bs']).day_count, 365)


if __name__ == '__main__':
    unittest.main()
