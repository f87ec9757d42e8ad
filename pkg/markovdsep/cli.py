# coding: utf-8
"""
    Purpose:
        Command line surface of markovdsep: validate model files, decide
        d-separation, list the implied conditional independences, test data
        against the Markov properties and causal compatibility, and rewrite
        or export models.
    Inputs:
        model and data files in the markov-dsep/1 JSON format (see README.md)
    Outputs:
        verdicts and reports on stdout, model JSON or DOT text on stdout or
        in the file given by -o; the exit code carries the verdict:
            0 holds / separated / valid
            1 fails / connected / violations found
            2 unknown or error
    Dependencies:
        argparse
        numpy
        networkx
        json_tricks
    Example:
        markov-dsep dsep models/diamond.json --x X --y Y --z Z
        markov-dsep check models/instrumental.json data.json --property compat
"""

import argparse
import logging
import os
import sys

from . import config
from .config import get_default_settings, settings_filename
from .diagram import validate_causal_model, validate_diagram
from .dsep import CategoricalSeparator, DSepQuery, d_separated_classical
from .errors import MarkovDsepError, ModelShapeError
from .load_utils import load_data, load_model
from .markov import (COMPATIBLE, FAILS, HOLDS, INCOMPATIBLE, check_global_markov, check_local_markov,
                     decide_compatibility, enumerate_dsep_triples)
from .normalize import as_causal_model, marginalize, normalize, pure_bloom_version
from .version import __version__
from .write_utils import dumps_model, render_compatibility, render_report, to_dot

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN = 0, 1, 2


def _wires(text):
    'Comma separated wire list; the empty string is the empty set'
    return frozenset(w.strip() for w in (text or '').split(',') if w.strip())


def _emit(text, args):
    if getattr(args, 'output', None):
        with open(args.output, 'w') as handle:
            handle.write(text)
        log.info('written to %s', args.output)
    else:
        sys.stdout.write(text)


def _settings(args):
    settings = get_default_settings(args.settings)
    return settings.updated(tol=args.tol, seed=args.seed, sample_size=args.budget, workers=args.workers)


def cmd_validate(args):
    d = load_model(args.model)
    problems = validate_diagram(d)
    if not problems:
        problems = validate_causal_model(d)
    for v in problems:
        print(v)
    if problems:
        print('{}: {} violation(s)'.format(args.model, len(problems)))
        return EXIT_FAIL
    print('{}: valid causal model'.format(args.model))
    return EXIT_OK


def cmd_dsep(args):
    phi = as_causal_model(load_model(args.model))
    q = DSepQuery(_wires(args.x), _wires(args.y), _wires(args.z))
    separated = CategoricalSeparator(phi).separated(q)
    print('{}: {}'.format(q, 'separated' if separated else 'connected'))
    if args.classical:
        try:
            classical = d_separated_classical(phi, q)
            print('classical: {}'.format('separated' if classical else 'connected'))
        except ModelShapeError as e:
            log.debug('no classical decider: %s', e)
            print('classical: not applicable')
    return EXIT_OK if separated else EXIT_FAIL


def cmd_list_ci(args):
    phi = as_causal_model(load_model(args.model))
    n = 0
    lines = []
    for t in enumerate_dsep_triples(phi, _settings(args)):
        if args.all:
            lines.append('{} {}'.format('separated' if t.separated else 'connected', t.query))
        elif t.separated and t.query.x and t.query.y:
            lines.append(str(t.query))
            n += 1
    if not args.all:
        lines.append('{} d-separated triple(s)'.format(n))
    _emit('\n'.join(lines) + '\n', args)
    return EXIT_OK


def cmd_check(args):
    settings = _settings(args)
    phi = as_causal_model(load_model(args.model))
    data = load_data(args.data, phi, settings)
    if args.backend and args.backend != data.backend:
        raise MarkovDsepError('data file holds {} kernels, not {}'.format(data.backend, args.backend))
    f = data.kernel_for(phi)
    if args.property == 'compat':
        result = decide_compatibility(phi, f, settings=settings)
        sys.stdout.write(render_compatibility(result, args.all))
        return {COMPATIBLE: EXIT_OK, INCOMPATIBLE: EXIT_FAIL}.get(result.status, EXIT_UNKNOWN)
    check = check_global_markov if args.property == 'global' else check_local_markov
    report = check(phi, f, settings=settings)
    sys.stdout.write(render_report(report, args.all))
    return {HOLDS: EXIT_OK, FAILS: EXIT_FAIL}.get(report.overall, EXIT_UNKNOWN)


def cmd_normalize(args):
    _emit(dumps_model(normalize(load_model(args.model))), args)
    return EXIT_OK


def cmd_marginalize(args):
    _emit(dumps_model(marginalize(load_model(args.model), _wires(args.keep))), args)
    return EXIT_OK


def cmd_purebloom(args):
    _emit(dumps_model(pure_bloom_version(as_causal_model(load_model(args.model)))), args)
    return EXIT_OK


def cmd_export_dot(args):
    d = load_model(args.model)
    name = os.path.splitext(os.path.basename(args.model))[0]
    _emit(to_dot(d, name), args)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", help="show verbose print outs, for debugging", action="store_true", default=False)
    common.add_argument("--settings", help="settings file (default {})".format(settings_filename), default=None)
    common.add_argument("--tol", help="tolerance of the conditional independence tests", type=float, default=None)
    common.add_argument("--seed", help="seed of the sampled triple sweeps", type=int, default=None)
    common.add_argument("--budget", help="number of triples sampled when a model is too large to sweep exhaustively",
                        type=int, default=None)
    common.add_argument("--workers", help="threads used for the conditional independence tests", type=int, default=None)

    parser = argparse.ArgumentParser(prog='markov-dsep',
                                     description='d-separation and causal compatibility for string diagram causal models')
    parser.add_argument("-d", "--details", help="show version and settings details", action="store_true", default=False)
    sub = parser.add_subparsers(dest='command')

    p = sub.add_parser('validate', parents=[common], help='check a model file')
    p.add_argument('model')
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser('dsep', parents=[common], help='decide X _||_ Y | Z (comma separated wire lists)')
    p.add_argument('model')
    p.add_argument('--x', default='')
    p.add_argument('--y', default='')
    p.add_argument('--z', default='')
    p.add_argument('--classical', action='store_true', default=False, help='also run the DAG decider')
    p.set_defaults(func=cmd_dsep)

    p = sub.add_parser('list-ci', parents=[common], help='list the d-separated triples of a model')
    p.add_argument('model')
    p.add_argument('--all', action='store_true', default=False, help='list every triple with its verdict')
    p.add_argument('-o', '--output', default=None)
    p.set_defaults(func=cmd_list_ci)

    p = sub.add_parser('check', parents=[common], help='test data against a model')
    p.add_argument('model')
    p.add_argument('data')
    p.add_argument('--property', choices=['global', 'local', 'compat'], default='compat')
    p.add_argument('--backend', choices=['finstoch', 'gauss'], default=None)
    p.add_argument('--all', action='store_true', default=False, help='print passing tests too')
    p.set_defaults(func=cmd_check)

    for name, func, text in (('normalize', cmd_normalize, 'remove eliminable boxes'),
                             ('purebloom', cmd_purebloom, 'make every wire an output'),
                             ('export-dot', cmd_export_dot, 'write graphviz DOT text')):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('model')
        p.add_argument('-o', '--output', default=None)
        p.set_defaults(func=func)

    p = sub.add_parser('marginalize', parents=[common], help='keep only the listed outputs')
    p.add_argument('model')
    p.add_argument('--keep', default='', help='comma separated output wires')
    p.add_argument('-o', '--output', default=None)
    p.set_defaults(func=cmd_marginalize)
    return parser


def print_details(args):
    settings_file = getattr(args, 'settings', None) or settings_filename
    print("***********************************************************************")
    print("\n            markov-dsep, d-separation for string diagram causal models\n")
    print("***********************************************************************")
    print("Version:", __version__)
    print("Settings file:", settings_file)
    print(" ... exists: ", os.path.isfile(settings_file))
    print("Tolerance override:", config.tolerance_env, "=", os.environ.get(config.tolerance_env))
    print("***********************************************************************")
    for k, v in vars(get_default_settings(settings_file)).items():
        print('{}: {}'.format(k, v))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if getattr(args, 'verbose', False) else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    if args.details:
        print_details(args)
        return EXIT_OK
    if not args.command:
        parser.print_help()
        return EXIT_UNKNOWN
    try:
        return args.func(args)
    except MarkovDsepError as e:
        sys.stderr.write('** {} **\n'.format(e))
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
