"""
Command line front end. Every subcommand maps onto a registered task; this module only parses arguments, runs the
task and writes its records.

Exit codes: 0 success, 1 internal or oracle failure, 2 domain error, 3 convergence error, 64 usage or configuration
error.
"""

import argparse
from logging import getLogger
from typing import Dict, List, Sequence, Tuple

from .exceptions import BasePricingException, ConfigurationException, UsageException
from .output import FORMATS, determine_format, render_records, write_text

logger = getLogger('eqp')

PROG = 'eqp'

MARKET_ARGUMENTS = ('s0', 'mu', 'sigma', 'rate', 'strike', 'ttm_days', 'day_count')


class ArgumentParser(argparse.ArgumentParser):
    """
    Raises UsageException instead of exiting so usage errors share the exit code path of every other error.
    """

    def error(self, message: str):
        raise UsageException(f'{self.prog}: {message}')


def configure_logging(verbosity: int = 0) -> None:
    """
    Sends the package logger to stderr through rich. WARNING by default, INFO with -v, DEBUG with -vv.
    """

    from logging import DEBUG, INFO, WARNING, getLogger as get_logger

    from rich.console import Console
    from rich.logging import RichHandler

    package_logger = get_logger('eqp')
    package_logger.setLevel({0: WARNING, 1: INFO}.get(verbosity, DEBUG))
    package_logger.propagate = False

    for handler in list(package_logger.handlers):
        if getattr(handler, '_eqp_cli', False):
            package_logger.removeHandler(handler)

    handler = RichHandler(console=Console(stderr=True), show_time=False, show_path=False, markup=False)
    handler._eqp_cli = True
    package_logger.addHandler(handler)


def _common_parser(defaults: dict) -> ArgumentParser:
    common = ArgumentParser(add_help=False)

    market = common.add_argument_group('market')
    market.add_argument('--s0', type=float, default=defaults['s0'], help='Spot price (default: %(default)s)')
    market.add_argument('--mu', type=float, default=defaults['mu'], help='Growth rate per year (default: %(default)s)')
    market.add_argument('--sigma', type=float, default=defaults['sigma'],
                        help='Volatility per year (default: %(default)s)')
    market.add_argument('--rate', type=float, default=defaults['rate'],
                        help='Riskless rate per year (default: %(default)s)')
    market.add_argument('--strike', type=float, default=defaults['strike'], help='Strike (default: %(default)s)')
    market.add_argument('--ttm-days', type=float, default=defaults['ttm_days'],
                        help='Days to expiry (default: %(default)s)')
    market.add_argument('--day-count', type=int, choices=(252, 360, 365, 366), default=defaults['day_count'],
                        help='Days per year (default: %(default)s, or $EQP_DAY_COUNT)')

    run = common.add_argument_group('run')
    run.add_argument('--format', choices=FORMATS, default=defaults['format'],
                     help='Output format (default: from --out extension, else csv)')
    run.add_argument('--out', default=defaults['out'], metavar='FILE', help='Output file (default: stdout)')
    run.add_argument('--seed', type=int, default=defaults['seed'], help='Random seed (default: %(default)s)')
    run.add_argument('--paths', type=int, default=defaults['paths'],
                     help='Monte Carlo paths (default: %(default)s)')
    run.add_argument('--workers', type=int, default=defaults['workers'],
                     help='Worker threads; results do not depend on it (default: %(default)s)')
    run.add_argument('--config', metavar='FILE', help='key=value, YAML or JSON file of flag values')
    run.add_argument('-v', '--verbose', action='count', default=0, help='-v for info, -vv for debug')

    return common


def build_parser(defaults: dict = None) -> Tuple[ArgumentParser, Dict[str, ArgumentParser]]:
    """
    Builds the top level parser and returns it with a map of subcommand name to subparser.
    """

    from rich_argparse import RichHelpFormatter

    from .configuration import environment_defaults

    defaults = defaults or environment_defaults()
    common = _common_parser(defaults)

    parser = ArgumentParser(prog=PROG,
                            description='Equilibrium call prices from target probabilities of positive return.',
                            formatter_class=RichHelpFormatter)

    subparsers = parser.add_subparsers(dest='command', required=True, metavar='COMMAND', parser_class=ArgumentParser)
    commands = {}

    def add(name: str, help_text: str) -> ArgumentParser:
        commands[name] = subparsers.add_parser(name, parents=[common], help=help_text, description=help_text,
                                               formatter_class=RichHelpFormatter)
        return commands[name]

    add('price-bs', 'Black-Scholes call price.')

    prob = add('prob', 'Probability of positive return at a premium.')
    premium = prob.add_mutually_exclusive_group(required=True)
    premium.add_argument('--premium', type=float, help='Premium paid for the call')
    premium.add_argument('--use-bs', action='store_true', help='Use the Black-Scholes price as the premium')

    add('price-eq', 'Equilibrium price at a target probability.').add_argument(
        '--target-p', type=float, required=True, help='Target probability of positive return')

    add('implied-vol', 'Black-Scholes implied volatility of a price.').add_argument(
        '--price', type=float, required=True, help='Call price')

    table = add('table', 'Equilibrium price table over growth rates and strikes.')
    table.add_argument('--target-p', type=float, default=0.2, help='Target probability (default: %(default)s)')
    table.add_argument('--mu-axis', metavar='AXIS', help='Growth rate axis, e.g. mu=-0.25:0.25:0.02')
    table.add_argument('--strike-axis', metavar='AXIS', help='Strike axis, e.g. K=80:112:2')
    table.add_argument('--layout', choices=('long', 'wide'), default='long',
                       help='One record per cell, or the printed layout (default: %(default)s)')
    table.add_argument('--report', metavar='FILE', help='Write the discrepancy report here instead of stderr')
    table.add_argument('--no-report', action='store_true', help='Skip the discrepancy report')

    scan = add('scan', 'Composition scan of probabilities at Black-Scholes prices.')
    scan.add_argument('--threshold', type=float, default=0.5, help='Probability threshold (default: %(default)s)')
    grid = scan.add_mutually_exclusive_group(required=True)
    grid.add_argument('--preset', choices=('rate', 'volatility', 'expiry'), help='Published composition grid')
    grid.add_argument('--axis', dest='axes', action='append', metavar='AXIS',
                      help='Custom axis name=start:stop:step or name=start:stop/count; repeatable')

    surface = add('surface', 'Implied volatility surface of equilibrium prices.')
    surface.add_argument('--target-p', type=float, default=0.5, help='Target probability (default: %(default)s)')
    surface.add_argument('--mu-axis', metavar='AXIS', help='Growth rate axis, e.g. mu=-0.1:0.25:0.01')
    surface.add_argument('--strike-axis', metavar='AXIS', help='Strike axis, e.g. K=80:120:2')

    conventions = add('convention-search', 'Rank day-count conventions against the printed Black-Scholes row.')
    conventions.add_argument('--tolerance', type=float, default=0.05, help='Match tolerance (default: %(default)s)')
    conventions.add_argument('--no-patterns', action='store_true',
                             help='Skip the comparison with printed feasibility patterns')

    add('mc-check', 'Closed forms against Monte Carlo on random configurations.').add_argument(
        '--configs', type=int, default=20, help='Random configurations (default: %(default)s)')

    chain = add('chain', 'Run a YAML or JSON task chain file.')
    chain.add_argument('file', help='Task chain file')
    chain.add_argument('--var', dest='variables', action='append', default=[], metavar='KEY=VALUE',
                       help='Template variable; repeatable')

    return parser, commands


def parse_arguments(argv: Sequence[str]) -> argparse.Namespace:
    """
    Parses argv, applying a --config file between the environment defaults and the explicit flags.
    """

    parser, commands = build_parser()
    args = parser.parse_args(argv)

    if args.config:
        from .configuration import coerce_flag_settings, load_config_file

        subparser = commands[args.command]
        settings = load_config_file(args.config)

        known = {action.dest for action in subparser._actions} - {'help', 'config'}
        unknown = sorted(set(settings) - known)

        if unknown:
            raise ConfigurationException(f'unknown settings in {args.config}: {unknown}')

        subparser.set_defaults(**coerce_flag_settings(subparser._actions, settings, args.config))
        args = parser.parse_args(argv)

    return args


def _market(args: argparse.Namespace) -> dict:
    return {name: getattr(args, name) for name in MARKET_ARGUMENTS}


def build_task(args: argparse.Namespace):
    """
    Turns parsed arguments into a runnable task or task chain.
    """

    from .tasks import packaged_chain, task_chain_from_file, task_from_dict

    if args.command == 'mc-check':
        return packaged_chain('oracle_checks', variables={'configs': args.configs,
                                                          'seed': args.seed,
                                                          'paths': args.paths,
                                                          'workers': args.workers})

    if args.command == 'chain':
        variables = {'seed': args.seed, 'paths': args.paths, 'workers': args.workers} | _market(args)

        for item in args.variables:
            key, separator, value = item.partition('=')

            if not separator:
                raise UsageException(f'--var expects KEY=VALUE, got {item!r}')

            variables[key.strip()] = value

        return task_chain_from_file(args.file, variables=variables)

    arguments = {
        'price-bs': lambda: {},
        'prob': lambda: {'premium': args.premium, 'use_bs': args.use_bs},
        'price-eq': lambda: {'target_p': args.target_p},
        'implied-vol': lambda: {'price': args.price},
        'table': lambda: {'target_p': args.target_p, 'mu_axis': args.mu_axis, 'strike_axis': args.strike_axis,
                          'layout': args.layout, 'report': not args.no_report, 'workers': args.workers},
        'scan': lambda: {'threshold': args.threshold, 'preset': args.preset, 'axes': args.axes,
                         'workers': args.workers},
        'surface': lambda: {'target_p': args.target_p, 'mu_axis': args.mu_axis, 'strike_axis': args.strike_axis,
                            'workers': args.workers},
        'convention-search': lambda: {'tolerance': args.tolerance, 'compare_patterns': not args.no_patterns}
    }[args.command]()

    return task_from_dict({args.command: _market(args) | arguments})


def _write_report(task, args: argparse.Namespace) -> None:
    report = getattr(task, 'meta', {}).get('Report')

    if not report:
        return

    if args.report:
        write_text(report, args.report)

    else:
        import sys

        sys.stderr.write(report if report.endswith('\n') else report + '\n')


def run(argv: Sequence[str] = None) -> int:
    """
    Runs one command.

    Args:
        argv (Sequence[str]): Arguments without the program name; defaults to sys.argv[1:].

    Returns:
        int: The process exit code.
    """

    import sys

    argv = list(sys.argv[1:] if argv is None else argv)
    configure_logging()

    try:
        args = parse_arguments(argv)
        configure_logging(args.verbose)
        task = build_task(args)

    except BasePricingException as ex:
        return ex.exit_code

    except SystemExit as ex:
        # --help
        return ex.code if isinstance(ex.code, int) else 0

    task.run()

    for line in getattr(task, 'performance_metrics', []):
        logger.debug(f'{line["Position"]} {line["Name"]}: {line["Status"]} in {line["Duration"]:.3f}s')

    if task.exit_code and not task.result:
        return task.exit_code

    try:
        write_text(render_records(task.result, args.format or determine_format(args.out)), args.out)
        _write_report(task, args)

    except BasePricingException as ex:
        return ex.exit_code

    except OSError as ex:
        logger.error(f'cannot write output: {ex}')
        return 1

    if task.exit_code:
        for error in task.errors:
            logger.error(str(error))

    return task.exit_code


def main():
    import sys

    sys.exit(run())
