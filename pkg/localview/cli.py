"""Command-line front end.

Every subcommand reads its inputs, runs one analysis and prints a report,
as text or, with ``--json``, as a JSON document holding the command, a
SHA-256 digest of each input file, the seed, the result and the warnings
raised on the way. Rationals are rendered as "p/q" strings.

Exit codes: 0 success, 1 internal error, 2 invalid arguments or inputs,
3 size cap exceeded (retry with ``--approx``), 4 I/O failure.
"""
import argparse
import hashlib
import json
import logging
import sys
import warnings
from collections import OrderedDict

import pandas as pd

from ._config import config_context, get_config
from .capacity import alpha, alpha_curve
from .coded_sets import CodedSetSearch
from .det_channel import verify_schedule
from .exceptions import SizeCapError, UnverifiedConstructionWarning
from .schedule import CodedSchedule
from .scheduler import (HOPS, MIGScheduler, conflict_graph,
                        fractional_coloring)
from .topology import classify, format_rational, parse_network
from .zchain import (DEFAULT_GRID_DB, ZChainDet, ZChainGauss,
                     zchain_det_achievable, zchain_det_region_max,
                     zchain_det_sweep, zchain_gauss_achievable,
                     zchain_gauss_sweep)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_SIZE_CAP = 3
EXIT_IO = 4

# draws used to check every emitted schedule
VERIFY_DRAWS = 100

# cases whose strategy is asserted to reach the region maximum
ASSERTED_OPTIMAL_CASES = (1, 2, 3, 11)


class UsageError(ValueError):
    """Invalid command line."""


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError("%s: %s" % (self.prog, message))


def _read_input(path, digests):
    with open(path, 'rb') as f:
        data = f.read()
    digests[path] = hashlib.sha256(data).hexdigest()
    return data.decode('utf-8')


def _load_network(path, digests):
    return parse_network(_read_input(path, digests))


def export_curve(net, path=None, search_cs=True, max_users=None,
                 allow_approx=None):
    """Tabulate :func:`alpha_curve` and optionally write it as CSV.

    Parameters
    ----------
    net : Network

    path : str or None, optional (default=None)
        Destination of the CSV file. Nothing is written when None.

    Returns
    -------
    table : pandas.DataFrame
        Columns ``h``, ``alpha_lower``, ``alpha_upper`` (as "p/q"),
        ``exact`` and ``provenance``, one row per hop count.
    """
    rows = []
    for h, result in alpha_curve(net, search_cs, max_users, allow_approx):
        provenance = 'lower=%s;upper=%s' % (
            '+'.join(result.sources('lower')),
            '+'.join(result.sources('upper')))
        rows.append((h, format_rational(result.lower),
                     format_rational(result.upper), result.exact,
                     provenance))
    table = pd.DataFrame(rows, columns=['h', 'alpha_lower', 'alpha_upper',
                                        'exact', 'provenance'])
    if path is not None:
        table.to_csv(path, index=False)
        logger.info("wrote %d curve rows to %s", len(table), path)
    return table


def _classify(args, digests):
    net = _load_network(args.network, digests)
    result = []
    lines = []
    for cls in classify(net):
        result.append(OrderedDict([('users', list(cls.users)),
                                   ('class', str(cls)),
                                   ('letter', cls.letter)]))
        letter = ' (%s)' % cls.letter if cls.letter else ''
        lines.append('%s: %s%s' % (list(cls.users), cls, letter))
    return result, lines


def _alpha(args, digests):
    net = _load_network(args.network, digests)
    result = alpha(net, args.hops, search_cs=not args.no_cs)
    lines = ['alpha(%d) = %s' % (args.hops, result),
             'lower from %s' % ', '.join(result.sources('lower')),
             'upper from %s' % ', '.join(result.sources('upper'))]
    return result.to_dict(), lines


def _verification_dict(report):
    doc = OrderedDict()
    doc['verified'] = report.verified
    doc['draws'] = report.n_draws
    doc['trials'] = report.n_trials
    doc['exhaustive_payloads'] = report.exhaustive
    doc['failures'] = [OrderedDict([('draw', d), ('user', u),
                                    ('codeword', j)])
                       for d, u, j in report.failures]
    doc['first_failure'] = report.first_failure
    return doc


def _verification_line(report):
    if report.verified:
        return 'verified: %d trials over %d gain draws' % (
            report.n_trials, report.n_draws)
    return 'NOT verified: %d failing codewords, first in draw %d' % (
        len(report.failures), report.failures[0][0])


def _schedule(args, digests):
    net = _load_network(args.network, digests)
    if args.coded:
        est = CodedSetSearch().fit(net)
        doc = est.to_dict()
        sched = est.schedule_
        lines = ['coded set schedule: value %s' % doc['value']]
    else:
        est = MIGScheduler(hops=args.hops).fit(net)
        doc = est.to_dict()
        sched = est.schedule_.to_coded() if args.hops == 1 else None
        lines = ['MIG schedule: value %s over %d slots'
                 % (doc['value'], est.schedule_.t)]
        lines.extend('slot %d: %s' % (s, list(users))
                     for s, users in enumerate(est.schedule_.subgraphs, 1))
        if args.hops > 1:
            warnings.warn("%d-hop schedules rely on local-view strategies "
                          "beyond linear decoding and are not checked by "
                          "simulation." % args.hops,
                          UnverifiedConstructionWarning)
            doc['verification'] = 'unverified'
            lines.append('not checked by simulation')
    if sched is not None:
        report = verify_schedule(net, sched, n_draws=VERIFY_DRAWS,
                                 random_state=args.seed)
        doc['verification'] = _verification_dict(report)
        lines.append(_verification_line(report))
    return doc, lines


def _verify(args, digests):
    net = _load_network(args.network, digests)
    try:
        doc = json.loads(_read_input(args.schedule, digests))
    except ValueError as exc:
        raise UsageError("invalid schedule document: %s" % exc)
    if not isinstance(doc, dict):
        raise UsageError("schedule document must be an object")
    sched = CodedSchedule.from_dict(doc, net.n_users)
    report = verify_schedule(net, sched, n_draws=args.trials,
                             random_state=args.seed)
    return _verification_dict(report), [_verification_line(report)]


def _coloring(args, digests):
    net = _load_network(args.network, digests)
    g = conflict_graph(net)
    result = fractional_coloring(g, k_max=args.kmax)
    doc = OrderedDict()
    doc['chi_f'] = format_rational(result.chi_f)
    doc['alpha_mis'] = format_rational(result.alpha_mis)
    doc['xi'] = OrderedDict((str(k), v) for k, v in result.xi.items())
    doc['best_k'] = result.best_k
    doc['exact'] = result.exact
    doc['mis_optimal'] = result.chi_f <= 2
    lines = ['chi_f = %s, alpha_MIS = %s' % (doc['chi_f'],
                                             doc['alpha_mis'])]
    lines.extend('xi_%d = %d' % (k, v) for k, v in result.xi.items())
    lines.append('MIS scheduling optimal: %s' % doc['mis_optimal'])
    return doc, lines


def _rates_dict(rates):
    return OrderedDict(zip(rates._fields, [float(r) for r in rates]))


def _parse_det_gains(values):
    gains = []
    for v in values:
        try:
            gains.append(int(v))
        except ValueError:
            raise UsageError("deterministic gains must be integers, got %r"
                             % (v,))
    return ZChainDet(*gains)


def _parse_gauss_gains(values, db):
    try:
        gains = [float(v) for v in values]
    except ValueError:
        raise UsageError("Gaussian gains must be numbers, got %r"
                         % (values,))
    if db:
        return ZChainGauss.from_db(*gains)
    return ZChainGauss(*gains)


def _det_sweep_summary(table):
    asserted = table[table['case'].isin(ASSERTED_OPTIMAL_CASES)]
    doc = OrderedDict()
    doc['instances'] = len(table)
    doc['region_violations'] = int((~table['in_region']).sum())
    doc['optimal_rate'] = float(table['optimal'].mean())
    doc['asserted_optimal_rate'] = (float(asserted['optimal'].mean())
                                    if len(asserted) else None)
    doc['optimal_by_case'] = OrderedDict(
        (str(case), float(rate))
        for case, rate in table.groupby('case')['optimal'].mean().items())
    return doc


def _gauss_sweep_summary(table):
    gap_limit = 4. + get_config()['gap_atol']
    doc = OrderedDict()
    doc['instances'] = len(table)
    doc['region_violations'] = int((~table['in_region']).sum())
    doc['max_gap'] = float(table['gap'].max())
    doc['min_gap'] = float(table['gap'].min())
    doc['generic_strategy'] = int((table['strategy'] == 'generic').sum())
    over = table[table['gap'] > gap_limit]
    doc['gap_violations'] = [
        OrderedDict(zip(ZChainGauss._fields, [float(v) for v in row[:5]]))
        for row in over.itertuples(index=False)]
    return doc


def _zchain(args, digests):
    if args.sweep is not None:
        if args.model == 'det':
            max_gain = int(args.sweep) if args.sweep else 4
            table = zchain_det_sweep(max_gain)
            doc = _det_sweep_summary(table)
            lines = ['%d instances, %d outside the region, optimal on '
                     '%.1f%%' % (doc['instances'], doc['region_violations'],
                                 100 * doc['optimal_rate'])]
        else:
            grid = DEFAULT_GRID_DB
            if args.sweep:
                try:
                    grid = tuple(float(v) for v in args.sweep.split(','))
                except ValueError:
                    raise UsageError("sweep grid must be comma-separated dB "
                                     "values, got %r" % (args.sweep,))
            table = zchain_gauss_sweep(grid)
            doc = _gauss_sweep_summary(table)
            lines = ['%d instances, %d outside the region, gap in '
                     '[%.4f, %.4f] bits'
                     % (doc['instances'], doc['region_violations'],
                        doc['min_gap'], doc['max_gap'])]
        if args.out:
            table.to_csv(args.out, index=False)
            lines.append('wrote %s' % args.out)
        return doc, lines

    if args.gains is None:
        raise UsageError("zchain needs --gains or --sweep")
    if args.model == 'det':
        z = _parse_det_gains(args.gains)
        rates, case = zchain_det_achievable(z)
        region_max, _ = zchain_det_region_max(z)
        doc = OrderedDict([('gains', OrderedDict(z._asdict())),
                           ('case', case), ('rates', _rates_dict(rates)),
                           ('sum', rates.sum), ('region_max', region_max)])
        lines = ['case %d: rates %r, sum %d of %d'
                 % (case, tuple(rates), rates.sum, region_max)]
    else:
        z = _parse_gauss_gains(args.gains, args.db)
        result = zchain_gauss_achievable(z)
        doc = OrderedDict([('gains', OrderedDict(z._asdict())),
                           ('regime', result.regime),
                           ('case', result.case),
                           ('strategy', result.strategy),
                           ('rates', _rates_dict(result.rates)),
                           ('sum', float(result.rates.sum)),
                           ('outer', float(result.outer)),
                           ('gap', float(result.gap))])
        lines = ['case %s (regime %d, %s rate): sum %.4f, outer %.4f, '
                 'gap %.4f bits'
                 % (result.case, result.regime, result.strategy,
                    result.rates.sum, result.outer, result.gap)]
    return doc, lines


def _curve(args, digests):
    net = _load_network(args.network, digests)
    table = export_curve(net, args.out, search_cs=not args.no_cs)
    doc = [OrderedDict(zip(table.columns, row))
           for row in table.itertuples(index=False)]
    for row in doc:
        row['h'] = int(row['h'])
        row['exact'] = bool(row['exact'])
    lines = ['h=%d: [%s, %s]' % (row['h'], row['alpha_lower'],
                                 row['alpha_upper']) for row in doc]
    if args.out:
        lines.append('wrote %s' % args.out)
    return doc, lines


def _common_flags():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true',
                        default=argparse.SUPPRESS,
                        help='print a JSON report')
    common.add_argument('--approx', action='store_true',
                        default=argparse.SUPPRESS,
                        help='degrade to greedy or partial answers above '
                             'the size caps instead of failing')
    common.add_argument('--strict-paper', action='store_true',
                        default=argparse.SUPPRESS,
                        help='use the Z-chain formulas as printed')
    common.add_argument('-v', '--verbose', action='count',
                        default=argparse.SUPPRESS,
                        help='log INFO (-v) or DEBUG (-vv) to stderr')
    return common


def build_parser():
    common = _common_flags()
    parser = _Parser(prog='localview', parents=[common],
                     description='Normalized sum-capacity of interference '
                                 'networks under local view.')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('classify', parents=[common],
                       help='classify every connected component')
    p.add_argument('network')
    p.set_defaults(handler=_classify)

    p = sub.add_parser('alpha', parents=[common],
                       help='bracket alpha(h)')
    p.add_argument('network')
    p.add_argument('--hops', type=int, choices=HOPS, default=1,
                   help='hop count; the curve command covers larger h')
    p.add_argument('--no-cs', action='store_true',
                   help='skip the coded set search')
    p.set_defaults(handler=_alpha)

    p = sub.add_parser('schedule', parents=[common],
                       help='optimal MIG or coded set schedule')
    p.add_argument('network')
    p.add_argument('--hops', type=int, choices=HOPS, default=1)
    p.add_argument('--coded', action='store_true',
                   help='search coded set schedules (1-hop)')
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(handler=_schedule)

    p = sub.add_parser('verify', parents=[common],
                       help='check a schedule by simulation')
    p.add_argument('network')
    p.add_argument('--schedule', required=True)
    p.add_argument('--trials', type=int, default=VERIFY_DRAWS)
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(handler=_verify)

    p = sub.add_parser('coloring', parents=[common],
                       help='fractional coloring of the conflict graph')
    p.add_argument('network')
    p.add_argument('--kmax', type=int, default=5)
    p.set_defaults(handler=_coloring)

    p = sub.add_parser('zchain', parents=[common],
                       help='Z-chain rates and sweeps')
    p.add_argument('model', choices=('det', 'gauss'))
    p.add_argument('--gains', nargs=5,
                   metavar=('N11', 'N22', 'N33', 'N12', 'N23'))
    p.add_argument('--db', action='store_true',
                   help='Gaussian gains are given in dB')
    p.add_argument('--sweep', nargs='?', const='', default=None,
                   metavar='GRID',
                   help='sweep all instances: the largest gain (det) or '
                        'comma-separated dB values (gauss)')
    p.add_argument('--out', help='write the sweep table as CSV')
    p.set_defaults(handler=_zchain)

    p = sub.add_parser('curve', parents=[common],
                       help='alpha against the hop count')
    p.add_argument('network')
    p.add_argument('--out', help='write the curve as CSV')
    p.add_argument('--no-cs', action='store_true',
                   help='skip the coded set search')
    p.set_defaults(handler=_curve)
    return parser


def _configure_logging(verbose):
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger('localview').setLevel(level)


def run(argv=None, stdout=None):
    """Run one command and return its exit code.

    Parameters
    ----------
    argv : list of str, optional
        Arguments without the program name; defaults to ``sys.argv[1:]``.

    stdout : file-like, optional
        Destination of the report; defaults to ``sys.stdout``.
    """
    if argv is None:
        argv = sys.argv[1:]
    if stdout is None:
        stdout = sys.stdout
    argv = list(argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write('error: %s\n' % exc)
        return EXIT_USAGE
    except SystemExit as exc:
        # --help
        return exc.code or EXIT_OK
    as_json = getattr(args, 'json', False)
    _configure_logging(getattr(args, 'verbose', 0))

    digests = OrderedDict()
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            with config_context(
                    allow_approx=getattr(args, 'approx', False),
                    strict_paper=getattr(args, 'strict_paper', False)):
                result, lines = args.handler(args, digests)
    except SizeCapError as exc:
        sys.stderr.write('error: %s (rerun with --approx)\n' % exc)
        return EXIT_SIZE_CAP
    except ValueError as exc:
        sys.stderr.write('error: %s\n' % exc)
        return EXIT_USAGE
    except (IOError, OSError) as exc:
        sys.stderr.write('error: %s\n' % exc)
        return EXIT_IO
    except Exception:
        logger.exception("internal error")
        return EXIT_INTERNAL

    caught_warnings = [OrderedDict([('category', w.category.__name__),
                                    ('message', str(w.message))])
                       for w in caught]
    if as_json:
        report = OrderedDict()
        report['command'] = argv
        report['inputs'] = digests
        report['seed'] = getattr(args, 'seed', None)
        report['result'] = result
        report['warnings'] = caught_warnings
        stdout.write(json.dumps(report, indent=2) + '\n')
    else:
        for line in lines:
            stdout.write(line + '\n')
        for w in caught_warnings:
            sys.stderr.write('warning: %s: %s\n' % (w['category'],
                                                    w['message']))
    return EXIT_OK


def main():
    sys.exit(run())
