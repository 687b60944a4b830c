#!/usr/bin/env python
# -*- coding: UTF-8 -*-
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
``kct``: batch command line over the conjugacy pipeline.

    kct simulate  --optimizer omd --objective tan --out runs/omd
    kct dmd       --input runs/omd/omd.json --delays 4 --rank 10 --out omd.json
    kct compare   --a omd.json --b ogd.json --shuffles 100 --out omd-ogd.json
    kct window    --input weights.json --window 100 --out matrix.csv --log10
    kct pca       --input weights.json --components 10 --out reduced/
    kct semi      --big wide.json --small narrow.json --tol 1e-3
    kct perturb   --dim 784 --eps 0.01 --out multipliers.csv
    kct ks        --x a.csv --y b.csv

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical degeneracy.
"""

import logging
import optparse
import os
import sys

import numpy as np

from koopconj import __version__ as VERSION
from koopconj import compare, core, io, optimizers, results, spectral, trajectory
from koopconj.errors import EXIT_DATA, EXIT_OK, EXIT_USAGE, ConfigError, KoopConjError


log = logging.getLogger(__name__)

LOG_FORMAT = '%(levelname)s: %(message)s'


def configure_logging(quiet=False):
    logging.basicConfig(stream=sys.stderr, format=LOG_FORMAT)
    logging.getLogger().setLevel(logging.WARNING if quiet else logging.INFO)


def _parser(command, usage, description):
    parser = optparse.OptionParser(prog='kct %s' % command, usage=usage, version=VERSION,
                                   description=description)
    parser.add_option('--seed', dest='seed', type='int', default=0,
                      help='random seed, recorded in the outputs (default: %default)')
    parser.add_option('-o', '--out', dest='out', help='output path')
    parser.add_option('-q', '--quiet', dest='quiet', action='store_true', default=False,
                      help='only log warnings and errors, print no tables')
    return parser


def _add_decomposition_options(parser):
    parser.add_option('-d', '--delays', dest='delays', type='int', default=4,
                      help='number of time delays (default: %default)')
    parser.add_option('-k', '--rank', dest='rank', type='int', default=10,
                      help='truncation rank (default: %default)')
    parser.add_option('--residual-tol', dest='residual_tol', type='float',
                      help='drop modes whose residual exceeds this')
    parser.add_option('--svd-tol', dest='svd_rel_tol', type='float', default=1e-12,
                      help='relative singular value cutoff (default: %default)')
    parser.add_option('--no-scale', dest='scale_columns', action='store_false', default=True,
                      help='do not scale snapshot columns to unit norm')
    parser.add_option('--components', dest='components', type='int',
                      help='project onto this many principal components first')


def _parse(parser, argv, required=()):
    opts, args = parser.parse_args(argv)
    if args:
        parser.error('unexpected arguments: %s' % ' '.join(args))
    for name in required:
        if getattr(opts, name) is None:
            parser.error('--%s is required' % name.replace('_', '-'))
    configure_logging(opts.quiet)
    return opts


def _decomposition_config(parser, opts):
    try:
        return spectral.DecompositionConfig(opts.rank, opts.svd_rel_tol, opts.residual_tol,
                                            opts.scale_columns)
    except ConfigError as e:
        parser.error(str(e))


def _prepare(ens, opts):
    if opts.components:
        ens = trajectory.pca_reduce(ens, opts.components).ensemble
    return ens


def _label(path):
    return os.path.splitext(os.path.basename(path))[0]


def cmd_simulate(argv):
    parser = _parser('simulate', 'Usage: %prog --optimizer omd|ogd|bm --out DIR [options]',
                     'Run an optimizer from a grid of initial conditions and write the '
                     'trajectory ensemble plus per-step losses.')
    parser.add_option('--optimizer', dest='optimizer', type='choice', choices=list(optimizers.ALGORITHMS))
    parser.add_option('--objective', dest='objective', default='tan',
                      type='choice', choices=['tan', 'quartic', optimizers.SUM_TAN,
                                              optimizers.SUM_QUARTIC, optimizers.CUSTOM],
                      help='objective function (default: %default)')
    parser.add_option('--objective-script', dest='objective_script',
                      help='python file defining value(x) and gradient(x) for --objective custom')
    parser.add_option('--eta', dest='eta', type='float', default=optimizers.DEFAULT_ETA,
                      help='learning rate (default: %default)')
    parser.add_option('--steps', dest='steps', type='int', default=optimizers.DEFAULT_STEPS,
                      help='recorded steps per trajectory (default: %default)')
    parser.add_option('--grid', dest='grid', default='paper',
                      help='"paper" (alias "builtin") for the built-in grid, or a CSV file '
                           'with one initial condition per row (default: %default)')
    parser.add_option('--format', dest='format', type='choice', choices=['binary', 'csv'],
                      default='binary', help='trajectory file format (default: %default)')
    opts = _parse(parser, argv, required=('optimizer', 'out'))

    grid_rows = io.read_grid(opts.grid) if opts.grid not in optimizers.BUILTIN_GRIDS else None
    try:
        run = optimizers.simulate(opts.optimizer, opts.objective, opts.eta, opts.steps, grid_rows,
                                  opts.objective_script)
    except ConfigError as e:
        parser.error(str(e))

    ens = run.trajectory.derive(run.trajectory.trajectories, seed=opts.seed)
    manifest = io.save_ensemble(ens, opts.out, name=opts.optimizer, fmt=opts.format)
    losses_path = os.path.join(opts.out, '%s-losses.csv' % opts.optimizer)
    io.write_columns(losses_path, ['step'] + list(ens.labels),
                     [list(range(run.config.steps))] + [list(loss) for loss in run.losses])
    log.info('wrote %d trajectories of %d steps: %s, %s', len(ens), ens.length, manifest, losses_path)
    return EXIT_OK


def cmd_dmd(argv):
    parser = _parser('dmd', 'Usage: %prog --input MANIFEST --out SPECTRUM.json [options]',
                     'Delay-embed an ensemble, run DMD-RRR and save its spectrum.')
    parser.add_option('-i', '--input', dest='input', help='ensemble manifest')
    _add_decomposition_options(parser)
    opts = _parse(parser, argv, required=('input', 'out'))
    cfg = _decomposition_config(parser, opts)

    ens = _prepare(io.load_ensemble(opts.input), opts)
    dec = spectral.dmd_rrr(trajectory.delay_embed(ens, opts.delays), cfg)
    io.save_spectrum(dec, opts.out)
    log.info('%d Koopman eigenvalues written to %s', dec.mode_count, opts.out)
    if not opts.quiet:
        results.print_spectrum(dec)
    return EXIT_OK


def cmd_compare(argv):
    parser = _parser('compare', 'Usage: %prog --a SPECTRUM.json --b SPECTRUM.json --out FILE [options]',
                     'Wasserstein distance between two spectra with a shuffle control.')
    parser.add_option('-a', '--a', dest='a', help='first spectrum')
    parser.add_option('-b', '--b', dest='b', help='second spectrum')
    parser.add_option('-n', '--shuffles', dest='shuffles', type='int',
                      default=compare.DEFAULT_SHUFFLES, help='number of shuffles (default: %default)')
    opts = _parse(parser, argv, required=('a', 'b', 'out'))
    if opts.shuffles < 1:
        parser.error('--shuffles must be positive')

    a = io.load_spectrum(opts.a).eigenvalue_set(_label(opts.a))
    b = io.load_spectrum(opts.b).eigenvalue_set(_label(opts.b))
    comparison = compare.shuffle_control(a, b, opts.shuffles, opts.seed)
    io.save_comparison(comparison, opts.out)
    if not opts.quiet:
        results.print_comparison(comparison)
    return EXIT_OK


def _decompose_window(task):
    ens, delays, cfg = task
    return spectral.dmd_rrr(trajectory.delay_embed(ens, delays), cfg)


def cmd_window(argv):
    parser = _parser('window', 'Usage: %prog --input MANIFEST --out MATRIX.csv [options]',
                     'Decompose consecutive windows and export their pairwise distance matrix.')
    parser.add_option('-i', '--input', dest='input', help='ensemble manifest')
    parser.add_option('-w', '--window', dest='window', type='int', default=100,
                      help='window length in iterations (default: %default)')
    parser.add_option('-s', '--stride', dest='stride', type='int',
                      help='offset between windows (default: window length)')
    parser.add_option('--start', dest='start', type='int', default=0,
                      help='first window offset (default: %default)')
    parser.add_option('--log10', dest='log10', action='store_true', default=False,
                      help='export log10 distances (floored at 1e-16)')
    parser.add_option('--spectra', dest='spectra', help='also save every window spectrum here')
    _add_decomposition_options(parser)
    opts = _parse(parser, argv, required=('input', 'out'))
    cfg = _decomposition_config(parser, opts)
    try:
        spec = trajectory.WindowSpec(opts.window, opts.stride, opts.start)
    except ConfigError as e:
        parser.error(str(e))

    ens = _prepare(io.load_ensemble(opts.input), opts)
    windows = trajectory.window(ens, spec)
    decs = core.parallel_map(_decompose_window, [(w, opts.delays, cfg) for w in windows])
    matrix = compare.window_distance_matrix(decs)
    io.export_matrix(matrix.distances, opts.out, log10=opts.log10, labels=matrix.labels)
    if opts.spectra:
        for label, dec in zip(matrix.labels, decs):
            io.save_spectrum(dec, os.path.join(opts.spectra, 'window-%s.json' % label.replace(':', '-')))
    log.info('%d windows of %d iterations, matrix written to %s', len(windows), spec.window_len, opts.out)
    if not opts.quiet:
        rows = [[label] + ['%.2f' % v for v in row] for label, row in zip(matrix.labels, matrix.log10)]
        print(results.format_table(['log10'] + list(matrix.labels), rows))
    return EXIT_OK


def cmd_pca(argv):
    parser = _parser('pca', 'Usage: %prog --input MANIFEST --components K --out DIR [options]',
                     'Project an ensemble onto its top principal components.')
    parser.add_option('-i', '--input', dest='input', help='ensemble manifest')
    parser.add_option('-c', '--components', dest='components', type='int')
    parser.add_option('--format', dest='format', type='choice', choices=['binary', 'csv'],
                      default='binary', help='trajectory file format (default: %default)')
    opts = _parse(parser, argv, required=('input', 'components', 'out'))

    reduction = trajectory.pca_reduce(io.load_ensemble(opts.input), opts.components)
    manifest = io.save_ensemble(reduction.ensemble, opts.out, name='reduced', fmt=opts.format)
    k = len(reduction.explained_variance)
    io.write_columns(os.path.join(opts.out, 'variance.csv'), ['component', 'explained', 'cumulative'],
                     [list(range(1, k + 1)), list(reduction.explained_variance),
                      list(reduction.cumulative_variance)])
    io.write_columns(os.path.join(opts.out, 'basis.csv'), ['mean'] + ['pc%d' % (i + 1) for i in range(k)],
                     [list(reduction.mean)] + [list(reduction.basis[:, i]) for i in range(k)])
    log.info('reduced ensemble written to %s', manifest)
    if not opts.quiet:
        results.print_variance(reduction.explained_variance)
    return EXIT_OK


def cmd_semi(argv):
    parser = _parser('semi', 'Usage: %prog --big SPECTRUM.json --small SPECTRUM.json [options]',
                     'Test whether the smaller spectrum is contained in the larger one.')
    parser.add_option('--big', dest='big', help='spectrum with more eigenvalues')
    parser.add_option('--small', dest='small', help='spectrum with fewer eigenvalues')
    parser.add_option('-t', '--tol', dest='tol', type='float', default=1e-3,
                      help='largest matched distance allowed (default: %default)')
    opts = _parse(parser, argv, required=('big', 'small'))

    big = io.load_spectrum(opts.big).eigenvalue_set(_label(opts.big))
    small = io.load_spectrum(opts.small).eigenvalue_set(_label(opts.small))
    result = compare.semi_conjugacy(big, small, opts.tol)
    if opts.out:
        io.save_semi_conjugacy(result, opts.out, {'big': big.label, 'small': small.label, 'tol': opts.tol})
    if not opts.quiet:
        results.print_semi_conjugacy(result)
    return EXIT_OK


def cmd_perturb(argv):
    parser = _parser('perturb', 'Usage: %prog --dim N --eps EPS --out FILE.csv [options]',
                     'Write multipliers 1 + eps * N(0, 1) for perturbed initializations.')
    parser.add_option('--dim', dest='dim', type='int', help='number of multipliers')
    parser.add_option('--eps', dest='eps', type='float', help='perturbation scale')
    opts = _parse(parser, argv, required=('dim', 'eps', 'out'))
    try:
        multipliers = trajectory.perturb_multipliers(opts.dim, opts.eps, opts.seed)
    except ConfigError as e:
        parser.error(str(e))

    n = len(multipliers)
    io.write_columns(opts.out, ['index', 'multiplier', 'seed', 'eps'],
                     [list(range(n)), list(multipliers), [opts.seed] * n, [float(opts.eps)] * n])
    log.info('%d multipliers (seed %d) written to %s', n, opts.seed, opts.out)
    return EXIT_OK


def cmd_ks(argv):
    parser = _parser('ks', 'Usage: %prog --x FILE.csv --y FILE.csv [options]',
                     'Two-sample Kolmogorov-Smirnov test on two one-column CSV files.')
    parser.add_option('-x', '--x', dest='x', help='first sample')
    parser.add_option('-y', '--y', dest='y', help='second sample')
    opts = _parse(parser, argv, required=('x', 'y'))

    result = compare.ks_two_sample(io.read_column(opts.x), io.read_column(opts.y))
    if opts.out:
        io.save_ks(result, opts.out, {'x': _label(opts.x), 'y': _label(opts.y)})
    if not opts.quiet:
        print('D = %.10g\np = %.10g' % (result.statistic, result.p_value))
    return EXIT_OK


COMMANDS = {
    'simulate': cmd_simulate,
    'dmd': cmd_dmd,
    'compare': cmd_compare,
    'window': cmd_window,
    'pca': cmd_pca,
    'semi': cmd_semi,
    'perturb': cmd_perturb,
    'ks': cmd_ks,
}

USAGE = """Usage: kct <command> [options]

commands:
  %s

Run 'kct <command> --help' for the options of one command.
""" % '\n  '.join(sorted(COMMANDS))


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        sys.stderr.write(USAGE)
        return EXIT_USAGE
    if argv[0] in ('-h', '--help'):
        sys.stdout.write(USAGE)
        return EXIT_OK
    if argv[0] == '--version':
        sys.stdout.write('%s\n' % VERSION)
        return EXIT_OK
    command = COMMANDS.get(argv[0])
    if command is None:
        sys.stderr.write('\nERROR: unknown command %r\n\n%s' % (argv[0], USAGE))
        return EXIT_USAGE

    try:
        return command(argv[1:])
    except KoopConjError as e:
        log.error('%s', e)
        return e.exit_code
    except (IOError, OSError) as e:
        log.error('%s', e)
        return EXIT_DATA


if __name__ == '__main__':
    sys.exit(main())
