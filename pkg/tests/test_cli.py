#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

import csv

import numpy as np
import pytest

from koopconj import __version__, io
from koopconj.errors import EXIT_DATA, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE
from koopconj.trajectory import TrajectoryEnsemble
from koopconj.utilities.cli import main

from tests.conftest import handmade_spectrum, linear_ensemble, simulate_linear, two_regime_ensemble


def _usage_error(argv):
    with pytest.raises(SystemExit) as excinfo:
        main(argv)
    return excinfo.value.code


def _rows(path):
    with open(str(path), newline='') as f:
        return list(csv.reader(f))


def test_main_usage_codes(capsys):
    assert main([]) == EXIT_USAGE
    assert main(['--help']) == EXIT_OK
    assert main(['frobnicate']) == EXIT_USAGE
    assert main(['--version']) == EXIT_OK
    assert __version__ in capsys.readouterr().out
    assert _usage_error(['dmd', '--help']) == 0


def _same_files(first, second):
    names = sorted(p.relative_to(first) for p in first.rglob('*') if p.is_file())
    assert names
    assert names == sorted(p.relative_to(second) for p in second.rglob('*') if p.is_file())
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_simulate_builtin_grid_keywords(tmp_path):
    out = tmp_path / 'omd'
    assert main(['simulate', '--optimizer', 'omd', '--objective', 'tan', '--eta', '0.01',
                 '--steps', '100', '--grid', 'paper', '--out', str(out), '-q']) == EXIT_OK
    ens = io.load_ensemble(str(out / 'omd.json'))
    assert len(ens) == 25
    assert ens.length == 100
    assert ens.meta['seed'] == 0
    losses = _rows(out / 'omd-losses.csv')
    assert losses[0][:2] == ['step', 'omd-00']
    assert len(losses) == 101

    # the alias and the default pick the same grid
    alias, default = tmp_path / 'alias', tmp_path / 'default'
    assert main(['simulate', '--optimizer', 'omd', '--grid', 'builtin', '--out', str(alias), '-q']) == 0
    assert main(['simulate', '--optimizer', 'omd', '--out', str(default), '-q']) == EXIT_OK
    _same_files(out, alias)
    _same_files(out, default)


def test_simulate_unknown_grid_file(tmp_path):
    assert main(['simulate', '--optimizer', 'omd', '--grid', str(tmp_path / 'nope.csv'),
                 '--out', str(tmp_path / 'omd'), '-q']) == EXIT_DATA


@pytest.mark.parametrize('command', [
    ['simulate', '--optimizer', 'bm', '--steps', '30'],
    ['dmd', '--delays', '2', '--rank', '4'],
    ['window', '--window', '200', '--delays', '2', '--log10'],
    ['pca', '--components', '1'],
])
def test_reruns_are_byte_identical(tmp_path, command):
    manifest = io.save_ensemble(two_regime_ensemble(), str(tmp_path))
    if command[0] != 'simulate':
        command = command + ['--input', manifest]
    first, second = tmp_path / 'first', tmp_path / 'second'
    for out in (first, second):
        out.mkdir()
        target = out / 'result.csv' if command[0] == 'window' else out / 'result.json'
        if command[0] in ('simulate', 'pca'):
            target = out / 'result'
        assert main(command + ['--seed', '9', '--out', str(target), '-q']) == EXIT_OK
    _same_files(first, second)


def test_simulate_bisection_rejects_quartic(tmp_path, capsys):
    code = _usage_error(['simulate', '--optimizer', 'bm', '--objective', 'quartic',
                         '--out', str(tmp_path)])
    assert code == EXIT_USAGE
    assert 'f(a) < 0' in capsys.readouterr().err
    assert not (tmp_path / 'bm.json').exists()


def test_simulate_single_step_and_missing_options(tmp_path):
    assert main(['simulate', '--optimizer', 'ogd', '--steps', '1', '--out', str(tmp_path), '-q']) == 0
    assert io.load_ensemble(str(tmp_path / 'ogd.json')).length == 1
    assert _usage_error(['simulate', '--out', str(tmp_path)]) == EXIT_USAGE
    assert _usage_error(['simulate', '--optimizer', 'sgd', '--out', str(tmp_path)]) == EXIT_USAGE


def test_simulate_custom_grid(tmp_path):
    grid = tmp_path / 'grid.csv'
    grid.write_text('-1.0,-1.0,0.5,0.5\n-0.8,-0.6,0.9,0.3\n')
    out = tmp_path / 'bm'
    assert main(['simulate', '--optimizer', 'bm', '--grid', str(grid), '--steps', '20',
                 '--format', 'csv', '--out', str(out), '-q']) == EXIT_OK
    ens = io.load_ensemble(str(out / 'bm.json'))
    assert len(ens) == 2
    assert ens.state_dim == 2
    assert (out / 'bm-001.csv').exists()


def test_dmd_recovers_linear_spectrum(tmp_path, rng):
    a = np.array([[0.9, 0.2], [0.0, 0.5]])
    manifest = io.save_ensemble(linear_ensemble(rng, a, 4, 30), str(tmp_path))
    out = tmp_path / 'spectrum.json'
    assert main(['dmd', '--input', manifest, '--delays', '0', '--out', str(out), '-q']) == EXIT_OK
    dec = io.load_spectrum(str(out))
    np.testing.assert_allclose(dec.eigenvalues, [0.9, 0.5], atol=1e-8)
    assert dec.meta['delays'] == 0


def test_dmd_error_exit_codes(tmp_path, rng):
    ens = TrajectoryEnsemble(tuple(rng.standard_normal((2, 2, 6))))
    manifest = io.save_ensemble(ens, str(tmp_path))
    out = str(tmp_path / 'spectrum.json')
    assert main(['dmd', '--input', manifest, '--delays', '5', '--out', out, '-q']) == EXIT_DATA
    assert main(['dmd', '--input', str(tmp_path / 'missing.json'), '--out', out, '-q']) == EXIT_DATA
    assert _usage_error(['dmd', '--input', manifest, '--rank', '0', '--out', out]) == EXIT_USAGE
    zeros = io.save_ensemble(TrajectoryEnsemble((np.zeros((2, 10)),)), str(tmp_path / 'zeros'))
    assert main(['dmd', '--input', zeros, '--delays', '0', '--out', out, '-q']) == EXIT_NUMERICAL


def test_dmd_prints_eigenvalue_table(tmp_path, rng, capsys):
    manifest = io.save_ensemble(linear_ensemble(rng, np.diag([0.8, -0.4]), 3, 20), str(tmp_path))
    assert main(['dmd', '--input', manifest, '--delays', '0',
                 '--out', str(tmp_path / 'spectrum.json')]) == EXIT_OK
    out = capsys.readouterr().out
    assert '0.8' in out
    assert '-0.4' in out


def test_compare_same_file_and_determinism(tmp_path):
    spectrum = str(tmp_path / 'a.json')
    io.save_spectrum(handmade_spectrum([0.9, 0.5, 0.1 + 0.3j, 0.1 - 0.3j]), spectrum)
    out = tmp_path / 'same.json'
    assert main(['compare', '--a', spectrum, '--b', spectrum, '--out', str(out), '-q']) == EXIT_OK
    comparison = io.load_comparison(str(out))
    assert comparison.distance == 0.0
    assert comparison.shuffle.frac_ge == 1.0

    other = str(tmp_path / 'b.json')
    io.save_spectrum(handmade_spectrum([0.7, 0.6, -0.2, 0.05j]), other)
    first, second = tmp_path / 'first.json', tmp_path / 'second.json'
    for path in (first, second):
        assert main(['compare', '--a', spectrum, '--b', other, '--seed', '11',
                     '--shuffles', '40', '--out', str(path), '-q']) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert io.load_comparison(str(first)).shuffle.seed == 11


def test_compare_size_mismatch_and_bad_shuffles(tmp_path):
    a, b = str(tmp_path / 'a.json'), str(tmp_path / 'b.json')
    io.save_spectrum(handmade_spectrum([0.9, 0.5]), a)
    io.save_spectrum(handmade_spectrum([0.9]), b)
    out = str(tmp_path / 'out.json')
    assert main(['compare', '--a', a, '--b', b, '--out', out, '-q']) == EXIT_DATA
    assert _usage_error(['compare', '--a', a, '--b', a, '--shuffles', '0', '--out', out]) == EXIT_USAGE


def test_window_two_regimes(tmp_path):
    manifest = io.save_ensemble(two_regime_ensemble(), str(tmp_path))
    out = tmp_path / 'matrix.csv'
    assert main(['window', '--input', manifest, '--window', '100', '--log10',
                 '--spectra', str(tmp_path / 'spectra'), '--out', str(out), '-q']) == EXIT_OK
    labels, matrix = io.read_matrix(str(out))
    assert matrix.shape == (8, 8)
    assert labels[0] == '0:99'
    assert labels[-1] == '700:799'
    assert (tmp_path / 'spectra' / 'window-700-799.json').exists()
    cross = matrix[:4, 4:].mean()
    within = np.mean([matrix[i, j] for block in (range(4), range(4, 8))
                      for i in block for j in block if i < j])
    assert cross - within >= 1.0


def test_window_longer_than_input(tmp_path):
    manifest = io.save_ensemble(two_regime_ensemble(length=80, switch=40), str(tmp_path))
    assert main(['window', '--input', manifest, '--window', '100',
                 '--out', str(tmp_path / 'm.csv'), '-q']) == EXIT_DATA


def test_pca_rank_one(tmp_path):
    direction = np.array([[1.0], [2.0], [-2.0]])
    signal = np.linspace(-1.0, 1.0, 12)
    ens = TrajectoryEnsemble((direction * signal, direction * signal ** 3))
    manifest = io.save_ensemble(ens, str(tmp_path))
    out = tmp_path / 'reduced'
    assert main(['pca', '--input', manifest, '--components', '1', '--out', str(out), '-q']) == EXIT_OK
    variance = _rows(out / 'variance.csv')
    assert variance[0] == ['component', 'explained', 'cumulative']
    assert float(variance[1][1]) == pytest.approx(1.0)
    assert io.load_ensemble(str(out / 'reduced.json')).state_dim == 1
    assert main(['pca', '--input', manifest, '--components', '2',
                 '--out', str(tmp_path / 'again'), '-q']) == EXIT_NUMERICAL


def test_semi_subset(tmp_path, capsys):
    big, small = str(tmp_path / 'big.json'), str(tmp_path / 'small.json')
    io.save_spectrum(handmade_spectrum([0.9, 0.5, 0.2]), big)
    io.save_spectrum(handmade_spectrum([0.9, 0.5]), small)
    out = tmp_path / 'semi.json'
    assert main(['semi', '--big', big, '--small', small, '--out', str(out)]) == EXIT_OK
    assert '"subset":true' in out.read_text()
    assert 'small' in capsys.readouterr().out
    assert main(['semi', '--big', small, '--small', big, '-q']) == EXIT_DATA


def test_perturb_records_seed(tmp_path):
    out = tmp_path / 'multipliers.csv'
    assert main(['perturb', '--dim', '50', '--eps', '0.01', '--seed', '4', '--out', str(out)]) == 0
    rows = _rows(out)
    assert rows[0] == ['index', 'multiplier', 'seed', 'eps']
    assert len(rows) == 51
    assert rows[1][2] == '4'
    again = tmp_path / 'again.csv'
    main(['perturb', '--dim', '50', '--eps', '0.01', '--seed', '4', '--out', str(again), '-q'])
    assert out.read_bytes() == again.read_bytes()


def test_ks_command(tmp_path, capsys):
    x, y = tmp_path / 'x.csv', tmp_path / 'y.csv'
    x.write_text('distance\n0.1\n0.2\n0.3\n')
    y.write_text('distance\n1.1\n1.2\n1.3\n')
    out = tmp_path / 'ks.json'
    assert main(['ks', '--x', str(x), '--y', str(y), '--out', str(out)]) == EXIT_OK
    assert 'D = 1' in capsys.readouterr().out
    assert '"statistic":1.0' in out.read_text()


def test_wide_state_reduced_then_deeply_delayed(tmp_path, rng):
    eigenvalues = np.linspace(0.98, 0.8, 10)
    q, _ = np.linalg.qr(rng.standard_normal((10, 10)))
    latent = q.dot(np.diag(eigenvalues)).dot(q.T)
    x0 = rng.standard_normal(10)
    # opposite starts keep the pooled mean at zero, so the reduced dynamics stay linear
    paths = simulate_linear(latent, [x0, -x0], 45)
    lift = rng.standard_normal((65000, 10))
    ens = TrajectoryEnsemble(tuple(lift.dot(p) for p in paths))
    manifest = io.save_ensemble(ens, str(tmp_path / 'weights'), name='weights')

    reduced = tmp_path / 'reduced'
    assert main(['pca', '--input', manifest, '--components', '10', '--out', str(reduced), '-q']) == 0
    assert io.load_ensemble(str(reduced / 'reduced.json')).state_dim == 10
    assert float(_rows(reduced / 'variance.csv')[-1][2]) == pytest.approx(1.0)

    out = tmp_path / 'spectrum.json'
    assert main(['dmd', '--input', str(reduced / 'reduced.json'), '--delays', '32', '--rank', '10',
                 '--out', str(out), '-q']) == EXIT_OK
    dec = io.load_spectrum(str(out))
    assert dec.mode_count == 10
    assert dec.modes.shape[0] == 330
    np.testing.assert_allclose(np.sort(dec.eigenvalues.real), np.sort(eigenvalues), atol=1e-5)
