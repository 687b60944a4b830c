#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
Console tables, summary CSV files and the HTML report of a project run.
"""

import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from koopconj import io, reportwriter
from koopconj.compare import SemiConjugacyResult, SpectrumComparison
from koopconj.spectral import describe_spectrum


WASSERSTEIN = 'wasserstein'
SEMI = 'semi-conjugacy'


@dataclass(frozen=True)
class PairResult:
    a: str
    b: str
    comparison: Optional[SpectrumComparison] = None
    semi: Optional[SemiConjugacyResult] = None

    @property
    def kind(self):
        return WASSERSTEIN if self.comparison is not None else SEMI

    def summary_row(self):
        if self.comparison is not None:
            shuffle = self.comparison.shuffle
            return [self.a, self.b, WASSERSTEIN, '%.6g' % self.comparison.distance,
                    '%.2f' % shuffle.frac_ge if shuffle else '', self.comparison.verdict()
                    if shuffle else '']
        verdict = 'subset' if self.semi.subset else 'not a subset'
        return [self.a, self.b, SEMI, '%.6g' % self.semi.max_residual, '', verdict]


SUMMARY_HEADER = ['a', 'b', 'test', 'distance', 'frac_ge', 'verdict']
SPECTRUM_HEADER = ['#', 're', 'im', '|lambda|', 'residual']


def format_table(header, rows):
    rows = [[str(c) for c in row] for row in rows]
    widths = [max([len(str(h))] + [len(r[i]) for r in rows]) for i, h in enumerate(header)]
    lines = ['  '.join(str(h).rjust(w) for h, w in zip(header, widths))]
    lines.append('  '.join('-' * w for w in widths))
    for row in rows:
        lines.append('  '.join(c.rjust(w) for c, w in zip(row, widths)))
    return '\n'.join(lines)


def spectrum_rows(dec):
    return [[i, '%.10f' % v.real, '%.10f' % v.imag, '%.10f' % abs(v), '%.3e' % r]
            for i, (v, r) in enumerate(zip(dec.eigenvalues, dec.residuals))]


def structure_line(dec):
    s = describe_spectrum(dec)
    return ('%d modes: %d real (%d positive), %d complex pairs; %d inside, %d on, %d outside '
            'the unit circle' % (s.mode_count, s.real, s.positive_real, s.complex_pairs,
                                 s.inside, s.on, s.outside))


def print_spectrum(dec, stream=None):
    stream = stream or sys.stdout
    stream.write('%s\n%s\n\n' % (format_table(SPECTRUM_HEADER, spectrum_rows(dec)), structure_line(dec)))


def print_comparison(comparison, stream=None):
    stream = stream or sys.stdout
    stream.write('distance:   %.10g\n' % comparison.distance)
    stream.write('assignment: %s\n' % ' '.join(str(j) for j in comparison.assignment))
    if comparison.shuffle is not None:
        record = comparison.shuffle
        stream.write('shuffles:   %d (seed %d)\n' % (record.n_shuff, record.seed))
        stream.write('frac_ge:    %.4f\n' % record.frac_ge)


def print_semi_conjugacy(result, stream=None):
    stream = stream or sys.stdout
    rows = [[i, j, '%.3e' % d] for i, j, d in result.matched_pairs]
    stream.write('%s\n' % format_table(['small', 'big', 'distance'], rows))
    stream.write('max residual: %.6g\nsubset: %s\n' % (result.max_residual, 'yes' if result.subset else 'no'))


def print_variance(explained, stream=None):
    stream = stream or sys.stdout
    cumulative = np.cumsum(explained)
    rows = [[i + 1, '%.6f' % e, '%.6f' % c] for i, (e, c) in enumerate(zip(explained, cumulative))]
    stream.write('%s\n' % format_table(['component', 'explained', 'cumulative'], rows))


def write_spectra_csv(results_dir, spectra):
    rows = [[], [], [], [], []]
    for name in sorted(spectra):
        dec = spectra[name]
        for i, (v, r) in enumerate(zip(dec.eigenvalues, dec.residuals)):
            for column, value in zip(rows, (name, i, float(v.real), float(v.imag), float(r))):
                column.append(value)
    return io.write_columns(os.path.join(results_dir, 'spectra.csv'),
                            ['process', 'index', 're', 'im', 'residual'], rows)


def write_summary_csv(results_dir, pairs):
    rows = [p.summary_row() for p in pairs]
    return io.write_columns(os.path.join(results_dir, 'comparisons.csv'), SUMMARY_HEADER,
                            list(zip(*rows)) if rows else [[] for _ in SUMMARY_HEADER])


def output_results(results_dir, project_name, spectra, pairs, global_config, process_configs,
                   quiet=False):
    """
    Print the run summary and write ``results.html``, ``spectra.csv`` and
    ``comparisons.csv`` into ``results_dir``.
    """
    write_spectra_csv(results_dir, spectra)
    write_summary_csv(results_dir, pairs)

    if not quiet:
        print('processes: %i' % len(spectra))
        print('comparisons: %i' % len(pairs))
        print('')
        for name in sorted(spectra):
            print('%s: %s' % (name, structure_line(spectra[name])))
        print('')
        if pairs:
            print(format_table(SUMMARY_HEADER, [p.summary_row() for p in pairs]))
            print('')

    report = reportwriter.Report(results_dir)
    report.write_line('<h1>Koopman Conjugacy Report: %s</h1>' % project_name)

    report.write_line('<h2>Summary</h2>')
    report.write_line('<div class="summary">')
    report.write_line('<b>processes:</b> %d<br />' % len(spectra))
    report.write_line('<b>comparisons:</b> %d<br />' % len(pairs))
    report.write_line('<b>seed:</b> %d<br />' % global_config.seed)
    report.write_line('<b>shuffles:</b> %d<br /><br />' % global_config.shuffles)
    report.write_line('<b>process configuration:</b><br /><br />')
    report.write_table(['process', 'source', 'delays', 'rank', 'components'],
                       [[p.name, p.source_description(), p.delays, p.rank,
                         p.components if p.components else '-'] for p in process_configs])
    report.write_line('</div>')

    if pairs:
        report.write_line('<h2>Comparisons</h2>')
        report.write_table(SUMMARY_HEADER, [p.summary_row() for p in pairs])

    report.write_line('<h2>Spectra</h2>')
    for name in sorted(spectra):
        dec = spectra[name]
        report.write_line('<h3>%s</h3>' % name)
        report.write_line('<p>%s</p>' % structure_line(dec))
        report.write_table(SPECTRUM_HEADER, spectrum_rows(dec))

    report.write_line('<hr />')
    report.write_closing_html()
    return report.fn
