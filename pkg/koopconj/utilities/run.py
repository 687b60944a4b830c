#!/usr/bin/env python
# -*- coding: UTF-8 -*-
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
``kct-run``: run every process of a project, decompose it and compare the
spectra pairwise. Results land in ``<project>/results/results_<timestamp>/``.
"""

import configparser
import itertools
import logging
import optparse
import os
import shutil
import sys
import time
from dataclasses import dataclass
from typing import Optional

from koopconj import __version__ as VERSION
from koopconj import compare, io, optimizers, progressbar, results, spectral, trajectory
from koopconj.errors import EXIT_DATA, EXIT_OK, ConfigError, KoopConjError
from koopconj.utilities.cli import configure_logging


log = logging.getLogger(__name__)

CONFIG_NAME = 'config.cfg'
PROCESS_PREFIX = 'process-'


def main(argv=None):
    """
    Main function to run a koopman-conjugacy project.
    """

    usage = 'Usage: %prog <project name> [options]'
    parser = optparse.OptionParser(usage=usage, version=VERSION)
    parser.add_option('-r', '--results', dest='results_dir', help='results directory to reprocess')
    parser.add_option('-d', '--directory', dest='projects_dir', help='directory containing project folder', default='.')
    parser.add_option('-q', '--quiet', dest='quiet', action='store_true', default=False,
                      help='only log warnings and errors')
    cmd_opts, args = parser.parse_args(argv)

    try:
        project_name = args[0]
    except IndexError:
        parser.error('no project specified (example: kct-run my_project)')

    configure_logging(cmd_opts.quiet)
    try:
        if cmd_opts.results_dir:  # don't run the processes, just re-compare saved spectra
            rerun_results(project_name, cmd_opts, cmd_opts.results_dir)
        else:
            run_project(project_name, cmd_opts)
    except KoopConjError as e:
        log.error('%s', e)
        return e.exit_code
    except (IOError, OSError) as e:
        log.error('%s', e)
        return EXIT_DATA
    return EXIT_OK


@dataclass(frozen=True)
class GlobalConfig:
    seed: int = 0
    delays: int = 4
    rank: int = 10
    svd_rel_tol: float = 1e-12
    residual_tol: Optional[float] = None
    scale_columns: bool = True
    shuffles: int = compare.DEFAULT_SHUFFLES
    components: Optional[int] = None
    semi_tol: float = 1e-3
    results_database: Optional[str] = None
    progress_bar: bool = True
    console_logging: bool = False


@dataclass(frozen=True)
class ProcessConfig:
    name: str
    delays: int
    rank: int
    components: Optional[int] = None
    optimizer: Optional[str] = None
    objective: str = optimizers.SUM_TAN
    eta: float = optimizers.DEFAULT_ETA
    steps: int = optimizers.DEFAULT_STEPS
    grid: str = 'paper'
    objective_script: Optional[str] = None
    manifest: Optional[str] = None

    def source_description(self):
        if self.manifest:
            return 'manifest %s' % self.manifest
        return '%s on %s, eta %g, %d steps, %s grid' % (
            self.optimizer, self.objective, self.eta, self.steps, self.grid)


def _get(config, section, option, kind=str, default=None):
    if not config.has_option(section, option):
        return default
    raw = config.get(section, option)
    if raw.strip() in ('', 'None'):
        return None
    try:
        if kind is bool:
            return config.getboolean(section, option)
        return kind(raw)
    except ValueError:
        raise ConfigError('[%s] %s = %r is not a valid %s' % (section, option, raw, kind.__name__))


def _read_global(config):
    section = 'global'
    defaults = GlobalConfig()
    if not config.has_section(section):
        return defaults
    values = {}
    for name, kind in (('seed', int), ('delays', int), ('rank', int), ('svd_rel_tol', float),
                       ('residual_tol', float), ('scale_columns', bool), ('shuffles', int),
                       ('components', int), ('semi_tol', float), ('results_database', str),
                       ('progress_bar', bool), ('console_logging', bool)):
        values[name] = _get(config, section, name, kind, getattr(defaults, name))
    for name in ('seed', 'delays', 'rank', 'svd_rel_tol', 'scale_columns', 'shuffles', 'semi_tol',
                 'progress_bar', 'console_logging'):
        if values[name] is None:
            raise ConfigError('[global] %s can not be None' % name)
    return GlobalConfig(**values)


def _read_process(config, section, global_config):
    name = section[len(PROCESS_PREFIX):]
    if not name:
        raise ConfigError('[%s] needs a process name' % section)
    manifest = _get(config, section, 'manifest')
    optimizer = _get(config, section, 'optimizer')
    if bool(manifest) == bool(optimizer):
        raise ConfigError('[%s] needs exactly one of "optimizer" or "manifest"' % section)
    if optimizer and optimizer not in optimizers.ALGORITHMS:
        raise ConfigError('[%s] unknown optimizer %r (choose from %s)' % (
            section, optimizer, ', '.join(optimizers.ALGORITHMS)))
    return ProcessConfig(
        name=name,
        delays=_get(config, section, 'delays', int, global_config.delays),
        rank=_get(config, section, 'rank', int, global_config.rank),
        components=_get(config, section, 'components', int, global_config.components),
        optimizer=optimizer,
        objective=_get(config, section, 'objective', str, optimizers.SUM_TAN),
        eta=_get(config, section, 'eta', float, optimizers.DEFAULT_ETA),
        steps=_get(config, section, 'steps', int, optimizers.DEFAULT_STEPS),
        grid=_get(config, section, 'grid', str, 'paper'),
        objective_script=_get(config, section, 'objective_script'),
        manifest=manifest,
    )


def _read_pairs(config, names):
    if not config.has_option('compare', 'pairs'):
        return list(itertools.combinations(sorted(names), 2))
    pairs = []
    for item in config.get('compare', 'pairs').split(','):
        item = item.strip()
        if not item:
            continue
        a, sep, b = item.partition(':')
        if not sep or a not in names or b not in names or a == b:
            raise ConfigError('[compare] pairs: %r is not a pair of two defined processes' % item)
        pairs.append((a, b))
    return pairs


def configure(project_dir, config_file=None):
    """
    Read ``config.cfg``: returns (global config, process configs in section
    order, comparison pairs).
    """
    if config_file is None:
        config_file = os.path.join(project_dir, CONFIG_NAME)
    if not os.path.exists(config_file):
        raise ConfigError('no configuration file: %s' % config_file)
    config = configparser.ConfigParser()
    try:
        config.read(config_file)
    except configparser.Error as e:
        raise ConfigError('%s: %s' % (config_file, e))

    global_config = _read_global(config)
    process_configs = [_read_process(config, section, global_config)
                       for section in config.sections() if section.startswith(PROCESS_PREFIX)]
    if not process_configs:
        raise ConfigError('%s defines no [process-<name>] section' % config_file)
    pairs = _read_pairs(config, [p.name for p in process_configs])
    return global_config, process_configs, pairs


def load_process(project_dir, process):
    """Simulate an optimizer process or ingest its trajectories from a manifest."""
    if process.manifest:
        return io.load_ensemble(os.path.join(project_dir, process.manifest))
    grid_rows = None
    if process.grid not in optimizers.BUILTIN_GRIDS:
        grid_rows = io.read_grid(os.path.join(project_dir, process.grid))
    script = None
    if process.objective_script:
        script = os.path.join(project_dir, process.objective_script)
    run = optimizers.simulate(process.optimizer, process.objective, process.eta, process.steps,
                              grid_rows, script)
    return run.trajectory


def decompose_process(ens, process, global_config):
    if process.components:
        ens = trajectory.pca_reduce(ens, process.components).ensemble
    cfg = spectral.DecompositionConfig(process.rank, global_config.svd_rel_tol,
                                       global_config.residual_tol, global_config.scale_columns)
    dec = spectral.dmd_rrr(trajectory.delay_embed(ens, process.delays), cfg)
    log.info('%s: %d Koopman eigenvalues', process.name, dec.mode_count)
    return dec


def compare_spectra(spectra, pairs, global_config, output_dir, bar=None):
    """
    Shuffle-controlled Wasserstein comparison for equal-size spectra, the
    subset test otherwise.
    """
    comparisons_dir = os.path.join(output_dir, 'comparisons')
    pair_results = []
    for a_name, b_name in pairs:
        a = spectra[a_name].eigenvalue_set(a_name)
        b = spectra[b_name].eigenvalue_set(b_name)
        path = os.path.join(comparisons_dir, '%s-vs-%s.json' % (a_name, b_name))
        if len(a) == len(b):
            comparison = compare.shuffle_control(a, b, global_config.shuffles, global_config.seed)
            io.save_comparison(comparison, path)
            pair_results.append(results.PairResult(a_name, b_name, comparison=comparison))
        else:
            big, small = (a, b) if len(a) > len(b) else (b, a)
            semi = compare.semi_conjugacy(big, small, global_config.semi_tol)
            io.save_semi_conjugacy(semi, path, {'big': big.label, 'small': small.label,
                                                'tol': global_config.semi_tol})
            pair_results.append(results.PairResult(big.label, small.label, semi=semi))
        if bar is not None:
            bar.advance('%s vs %s' % (a_name, b_name))
    return pair_results


def _apply_console_logging(global_config, quiet):
    if global_config.console_logging and not quiet:
        logging.getLogger().setLevel(logging.DEBUG)


def run_project(project_name, cmd_opts):
    project_dir = os.path.join(cmd_opts.projects_dir, project_name)
    global_config, process_configs, pairs = configure(project_dir)
    _apply_console_logging(global_config, cmd_opts.quiet)

    run_localtime = time.localtime()
    output_dir = os.path.join(project_dir, 'results',
                              'results_%s' % time.strftime('%Y.%m.%d_%H.%M.%S', run_localtime))
    os.makedirs(output_dir)
    # copy config file to results directory
    shutil.copy(os.path.join(project_dir, CONFIG_NAME), os.path.join(output_dir, CONFIG_NAME))

    bar = None
    if global_config.progress_bar and not cmd_opts.quiet:
        print('\n  processes:    %i' % len(process_configs))
        print('  comparisons:  %i\n' % len(pairs))
        bar = progressbar.ProgressBar(len(process_configs) + len(pairs))

    spectra = {}
    for process in process_configs:
        ens = load_process(project_dir, process)
        if not process.manifest:
            io.save_ensemble(ens, os.path.join(output_dir, 'trajectories'), name=process.name)
        dec = decompose_process(ens, process, global_config)
        io.save_spectrum(dec, os.path.join(output_dir, 'spectra', '%s.json' % process.name))
        spectra[process.name] = dec
        if bar is not None:
            bar.advance(process.name)

    pair_results = compare_spectra(spectra, pairs, global_config, output_dir, bar)

    if not cmd_opts.quiet:
        print('\n\nanalyzing results...\n')
    report = results.output_results(output_dir, project_name, spectra, pair_results,
                                    global_config, process_configs, quiet=cmd_opts.quiet)
    log.info('created: %s', report)

    if global_config.results_database is not None:
        log.info('loading results into database: %s', global_config.results_database)
        import koopconj.resultsloader
        koopconj.resultsloader.load_results_database(project_name, run_localtime,
                                                     global_config.results_database, global_config,
                                                     spectra, pair_results)
    return output_dir


def rerun_results(project_name, cmd_opts, results_dir):
    """Compare the saved spectra of an earlier run again and rewrite its report."""
    project_dir = os.path.join(cmd_opts.projects_dir, project_name)
    output_dir = os.path.join(project_dir, 'results', results_dir)
    saved_config = os.path.join(output_dir, CONFIG_NAME)
    global_config, process_configs, pairs = configure(project_dir, config_file=saved_config)
    _apply_console_logging(global_config, cmd_opts.quiet)

    spectra = {}
    for process in process_configs:
        spectra[process.name] = io.load_spectrum(
            os.path.join(output_dir, 'spectra', '%s.json' % process.name))
    pair_results = compare_spectra(spectra, pairs, global_config, output_dir)

    if not cmd_opts.quiet:
        print('\n\nanalyzing results...\n')
    report = results.output_results(output_dir, project_name, spectra, pair_results,
                                    global_config, process_configs, quiet=cmd_opts.quiet)
    log.info('created: %s', report)
    return output_dir


if __name__ == '__main__':
    sys.exit(main())
