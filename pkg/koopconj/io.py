#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
Persistence for ensembles, spectra, comparisons and distance matrices.

Formats (all stamped with format_version 1):

  - manifest (JSON): format_version, trajectory_files (relative to the
    manifest), state_dim, length, labels, meta.
  - trajectory CSV: one trajectory per file, rows = time steps,
    columns = variables, no header.
  - trajectory binary: b"KCT1", little-endian u32 state_dim, u32 length,
    u32 trajectory count, then each trajectory as row-major float64.
  - spectrum / comparison JSON, matrix CSV with window labels.

Floats are written with repr(), the shortest string that parses back to
the same 64-bit value. Every output goes to a temporary file that is
renamed over the target, so a failure never leaves a partial file.
"""

import csv
import json
import logging
import os
import struct
import tempfile
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from koopconj.compare import KSResult, SemiConjugacyResult, ShuffleRecord, SpectrumComparison
from koopconj.errors import FormatError, ManifestError, SchemaError
from koopconj.spectral import SpectralDecomposition
from koopconj.trajectory import TrajectoryEnsemble


log = logging.getLogger(__name__)

FORMAT_VERSION = 1
MAGIC = b'KCT1'
_HEADER = struct.Struct('<4sIII')


@contextmanager
def atomic_write(path, mode='w'):
    """Write to a temporary sibling of ``path``, then rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        os.makedirs(directory, 0o755)
    fd, tmp = tempfile.mkstemp(prefix='.tmp-', dir=directory)
    newline = '' if 'b' not in mode else None
    try:
        with os.fdopen(fd, mode, newline=newline) as f:
            yield f
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def _float(value):
    return repr(float(value))


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def _dump_json(doc, path):
    with atomic_write(path) as f:
        f.write(json.dumps(doc, separators=(',', ':')))
        f.write('\n')


def _read_json(path):
    if not os.path.exists(path):
        raise FormatError('%s: no such file' % path)
    try:
        with open(path) as f:
            return json.load(f)
    except ValueError as e:
        raise SchemaError('%s: not valid JSON (%s)' % (path, e))


# -- ENSEMBLES ---------------------------------------------------------------

@dataclass(frozen=True)
class EnsembleManifest:
    trajectory_files: Tuple[str, ...]
    state_dim: int
    length: int
    labels: Tuple[str, ...] = ()
    meta: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    def to_json(self):
        return {'format_version': self.format_version,
                'trajectory_files': list(self.trajectory_files),
                'state_dim': self.state_dim, 'length': self.length,
                'labels': list(self.labels), 'meta': _jsonable(self.meta)}

    @classmethod
    def from_json(cls, doc, path='manifest'):
        if not isinstance(doc, dict):
            raise ManifestError('%s: manifest must be a JSON object' % path)
        version = doc.get('format_version')
        if version != FORMAT_VERSION:
            raise ManifestError('%s: unknown format_version %r' % (path, version))
        files = doc.get('trajectory_files')
        if not isinstance(files, list) or not files:
            raise ManifestError('%s: trajectory_files must be a non-empty list' % path)
        for key in ('state_dim', 'length'):
            if not isinstance(doc.get(key), int) or doc[key] < 1:
                raise ManifestError('%s: %s must be a positive integer' % (path, key))
        return cls(tuple(files), doc['state_dim'], doc['length'],
                   tuple(doc.get('labels') or ()), dict(doc.get('meta') or {}))


def _read_csv_trajectory(path):
    rows = []
    with open(path, newline='') as f:
        for row_num, row in enumerate(csv.reader(f)):
            if not row:
                continue
            values = []
            for col_num, text in enumerate(row):
                try:
                    value = float(text)
                except ValueError:
                    raise FormatError('%s: row %d, column %d: %r is not a number' % (
                        path, row_num, col_num, text))
                if not np.isfinite(value):
                    raise FormatError('%s: row %d, column %d: non-finite value %r' % (
                        path, row_num, col_num, text))
                values.append(value)
            if rows and len(values) != len(rows[0]):
                raise FormatError('%s: row %d has %d columns, expected %d' % (
                    path, row_num, len(values), len(rows[0])))
            rows.append(values)
    if not rows:
        raise FormatError('%s: empty trajectory file' % path)
    return [np.array(rows).T]


def _read_binary_trajectories(path):
    with open(path, 'rb') as f:
        payload = f.read()
    if len(payload) < _HEADER.size:
        raise FormatError('%s: truncated header' % path)
    magic, state_dim, length, count = _HEADER.unpack_from(payload)
    if magic != MAGIC:
        raise FormatError('%s: bad magic %r' % (path, magic))
    expected = _HEADER.size + 8 * state_dim * length * count
    if len(payload) != expected:
        raise FormatError('%s: %d bytes, header promises %d' % (path, len(payload), expected))
    data = np.frombuffer(payload, dtype='<f8', offset=_HEADER.size)
    trajs = [t.astype(np.float64) for t in data.reshape(count, state_dim, length)]
    for index, traj in enumerate(trajs):
        bad = np.argwhere(~np.isfinite(traj))
        if bad.size:
            raise FormatError('%s: trajectory %d, row %d, column %d: non-finite value' % (
                path, index, bad[0][1], bad[0][0]))
    return trajs


def read_trajectory_file(path):
    with open(path, 'rb') as f:
        head = f.read(len(MAGIC))
    if head == MAGIC:
        return _read_binary_trajectories(path)
    return _read_csv_trajectory(path)


def load_ensemble(manifest_path):
    manifest = EnsembleManifest.from_json(_read_json(manifest_path), manifest_path)
    base = os.path.dirname(os.path.abspath(manifest_path))
    trajectories = []
    for name in manifest.trajectory_files:
        path = os.path.join(base, name)
        if not os.path.exists(path):
            raise ManifestError('%s: trajectory file %s does not exist' % (manifest_path, name))
        for traj in read_trajectory_file(path):
            if traj.shape != (manifest.state_dim, manifest.length):
                raise FormatError('%s: expected shape (%d, %d) (state_dim, length), found (%d, %d)' % (
                    name, manifest.state_dim, manifest.length, traj.shape[0], traj.shape[1]))
            trajectories.append(traj)
    labels = manifest.labels or None
    if labels is not None and len(labels) != len(trajectories):
        raise ManifestError('%s: %d labels for %d trajectories' % (
            manifest_path, len(labels), len(trajectories)))
    log.info('loaded %d trajectories (%d x %d) from %s', len(trajectories),
             manifest.state_dim, manifest.length, manifest_path)
    return TrajectoryEnsemble(tuple(trajectories), labels, manifest.meta)


def write_binary_trajectories(trajectories, path):
    trajectories = list(trajectories)
    state_dim, length = trajectories[0].shape
    with atomic_write(path, 'wb') as f:
        f.write(_HEADER.pack(MAGIC, state_dim, length, len(trajectories)))
        for traj in trajectories:
            f.write(np.ascontiguousarray(traj, dtype='<f8').tobytes())


def write_csv_trajectory(traj, path):
    with atomic_write(path) as f:
        writer = csv.writer(f, lineterminator='\n')
        for step in np.asarray(traj).T:
            writer.writerow([_float(v) for v in step])


def save_ensemble(ens, directory, name='ensemble', fmt='binary'):
    """
    Write ``ens`` under ``directory`` as ``<name>.kct`` (binary) or one
    ``<name>-NNN.csv`` per trajectory, plus ``<name>.json`` manifest.
    Returns the manifest path.
    """
    if fmt == 'binary':
        files = ['%s.kct' % name]
        write_binary_trajectories(ens.trajectories, os.path.join(directory, files[0]))
    elif fmt == 'csv':
        files = []
        for index, traj in enumerate(ens.trajectories):
            files.append('%s-%03d.csv' % (name, index))
            write_csv_trajectory(traj, os.path.join(directory, files[-1]))
    else:
        raise FormatError('unknown trajectory format %r (binary or csv)' % fmt)
    manifest = EnsembleManifest(tuple(files), ens.state_dim, ens.length, ens.labels, ens.meta)
    manifest_path = os.path.join(directory, '%s.json' % name)
    _dump_json(manifest.to_json(), manifest_path)
    return manifest_path


# -- SPECTRA -----------------------------------------------------------------

def _complex_json(values):
    return [{'re': float(v.real), 'im': float(v.imag)} for v in np.asarray(values, dtype=complex).ravel()]


def _require(doc, path, key, kind):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError('%s.%s: missing field' % (path, key) if path else '%s: missing field' % key)
    value = doc[key]
    where = '%s.%s' % (path, key) if path else key
    if kind == 'number':
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError('%s: expected a number, found %r' % (where, value))
    elif not isinstance(value, kind):
        raise SchemaError('%s: expected %s, found %r' % (where, getattr(kind, '__name__', kind), value))
    return value


def _complex_from_json(items, where):
    if not isinstance(items, list):
        raise SchemaError('%s: expected a list' % where)
    out = []
    for index, item in enumerate(items):
        item_path = '%s[%d]' % (where, index)
        out.append(complex(_require(item, item_path, 're', 'number'),
                           _require(item, item_path, 'im', 'number')))
    return np.array(out, dtype=complex)


def _check_version(doc, path):
    version = _require(doc, '', 'format_version', int)
    if version != FORMAT_VERSION:
        raise SchemaError('format_version: unknown version %r in %s' % (version, path))


def spectrum_to_json(dec):
    window = dec.window
    return {
        'format_version': FORMAT_VERSION,
        'eigenvalues': _complex_json(dec.eigenvalues),
        'residuals': [float(r) for r in dec.residuals],
        'rank': int(dec.rank),
        'delay': int(dec.meta.get('delays', 0)),
        'window': list(window) if window is not None else None,
        'amplitudes': [_complex_json(row) for row in dec.amplitudes],
        'modes': [_complex_json(column) for column in dec.modes.T],
        'meta': _jsonable(dec.meta),
    }


def spectrum_from_json(doc, path='spectrum'):
    _check_version(doc, path)
    eigenvalues = _complex_from_json(_require(doc, '', 'eigenvalues', list), 'eigenvalues')
    residuals = _require(doc, '', 'residuals', list)
    for index, value in enumerate(residuals):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 0:
            raise SchemaError('residuals[%d]: expected a non-negative number, found %r' % (index, value))
    rank = _require(doc, '', 'rank', int)
    delay = _require(doc, '', 'delay', int)
    amplitudes = [_complex_from_json(row, 'amplitudes[%d]' % i)
                  for i, row in enumerate(_require(doc, '', 'amplitudes', list))]
    modes = [_complex_from_json(col, 'modes[%d]' % i)
             for i, col in enumerate(_require(doc, '', 'modes', list))]
    if len(modes) != len(eigenvalues):
        raise SchemaError('modes: %d modes for %d eigenvalues' % (len(modes), len(eigenvalues)))
    meta = dict(_require(doc, '', 'meta', dict))
    meta['delays'] = delay
    window = doc.get('window')
    if window is not None:
        if not isinstance(window, list) or len(window) != 2:
            raise SchemaError('window: expected [t1, t2], found %r' % (window,))
        meta['window'] = list(window)
    embed_dim = len(modes[0]) if modes else 0
    mode_matrix = np.array(modes, dtype=complex).T if modes else np.zeros((embed_dim, 0), complex)
    amplitude_matrix = np.array(amplitudes, dtype=complex).reshape(len(amplitudes), len(eigenvalues))
    return SpectralDecomposition(eigenvalues, mode_matrix, residuals, amplitude_matrix, rank, meta)


def save_spectrum(dec, path):
    _dump_json(spectrum_to_json(dec), path)
    log.debug('wrote spectrum with %d eigenvalues to %s', dec.mode_count, path)


def load_spectrum(path):
    return spectrum_from_json(_read_json(path), path)


# -- COMPARISONS -------------------------------------------------------------

def comparison_to_json(comparison):
    doc = {
        'format_version': FORMAT_VERSION,
        'distance': float(comparison.distance),
        'assignment': [int(i) for i in comparison.assignment],
        'shuffle': None,
        'meta': _jsonable(comparison.meta),
    }
    if comparison.shuffle is not None:
        record = comparison.shuffle
        doc['shuffle'] = {'n_shuff': record.n_shuff, 'seed': record.seed,
                          'frac_ge': float(record.frac_ge),
                          'distances': [float(d) for d in record.distances]}
    return doc


def comparison_from_json(doc, path='comparison'):
    _check_version(doc, path)
    distance = _require(doc, '', 'distance', 'number')
    assignment = tuple(_require(doc, '', 'assignment', list))
    shuffle = doc.get('shuffle')
    record = None
    if shuffle is not None:
        record = ShuffleRecord(_require(shuffle, 'shuffle', 'n_shuff', int),
                               _require(shuffle, 'shuffle', 'seed', int),
                               _require(shuffle, 'shuffle', 'frac_ge', 'number'),
                               tuple(_require(shuffle, 'shuffle', 'distances', list)))
    return SpectrumComparison(distance, assignment, record, dict(doc.get('meta') or {}))


def save_comparison(comparison, path):
    _dump_json(comparison_to_json(comparison), path)


def load_comparison(path):
    return comparison_from_json(_read_json(path), path)


def semi_conjugacy_to_json(result, meta=None):
    return {'format_version': FORMAT_VERSION, 'subset': result.subset,
            'max_residual': float(result.max_residual),
            'matched_pairs': [{'small': i, 'big': j, 'distance': float(d)}
                              for i, j, d in result.matched_pairs],
            'meta': _jsonable(meta or {})}


def save_semi_conjugacy(result, path, meta=None):
    _dump_json(semi_conjugacy_to_json(result, meta), path)


def save_ks(result, path, meta=None):
    _dump_json({'format_version': FORMAT_VERSION, 'statistic': float(result.statistic),
                'p_value': float(result.p_value), 'meta': _jsonable(meta or {})}, path)


# -- MATRICES ----------------------------------------------------------------

def export_matrix(matrix, path, log10=False, labels=None):
    """
    CSV with a header row and a header column of labels (window intervals
    ``t1:t2``); log10 uses the 1e-16 floor.
    """
    from koopconj.compare import log10_clamped
    matrix = np.asarray(matrix, dtype=float)
    if log10:
        matrix = log10_clamped(matrix)
    if not np.all(np.isfinite(matrix)):
        raise FormatError('%s: matrix holds non-finite values' % path)
    labels = list(labels) if labels is not None else [str(i) for i in range(matrix.shape[0])]
    if len(labels) != matrix.shape[0] or matrix.shape[0] != matrix.shape[1]:
        raise FormatError('%s: %d labels for a %dx%d matrix' % (
            path, len(labels), matrix.shape[0], matrix.shape[1]))
    with atomic_write(path) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow([''] + labels)
        for label, row in zip(labels, matrix):
            writer.writerow([label] + [_float(v) for v in row])
    return path


def read_matrix(path):
    """Inverse of export_matrix: (labels, matrix)."""
    with open(path, newline='') as f:
        rows = list(csv.reader(f))
    if not rows:
        raise FormatError('%s: empty matrix file' % path)
    labels = rows[0][1:]
    matrix = np.array([[float(v) for v in row[1:]] for row in rows[1:]], dtype=float)
    return labels, matrix.reshape(len(labels), len(labels))


def write_columns(path, header, columns):
    """Plain CSV of equal-length columns (losses, variances, multipliers)."""
    with atomic_write(path) as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return path


def read_column(path):
    """One-column numeric CSV (optionally with a header line) as a float array."""
    values = []
    with open(path, newline='') as f:
        for row_num, row in enumerate(csv.reader(f)):
            if not row:
                continue
            try:
                values.append(float(row[0]))
            except ValueError:
                if row_num == 0:
                    continue
                raise FormatError('%s: row %d: %r is not a number' % (path, row_num, row[0]))
    return np.array(values, dtype=float)


def read_grid(path):
    """
    Initial-condition grid: one point per row, no header. For the bisection
    method a row holds a(0) followed by b(0).
    """
    rows = _read_csv_trajectory(path)[0].T
    return np.array(rows, dtype=float)
