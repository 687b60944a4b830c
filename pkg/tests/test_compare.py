#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

import itertools
import math

import numpy as np
import pytest

from koopconj import compare
from koopconj.compare import (EigenvalueSet, ks_two_sample, log10_clamped, semi_conjugacy,
                              shuffle_control, wasserstein, window_distance_matrix)
from koopconj.errors import CardinalityError, ConfigError, DataError
from koopconj.spectral import dmd_rrr
from koopconj.trajectory import WindowSpec, delay_embed, window

from tests.conftest import handmade_spectrum, two_regime_ensemble


def _random_set(rng, n, label=''):
    return EigenvalueSet(rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n), label)


def test_identical_sets_have_zero_distance():
    a = EigenvalueSet([0.9, 0.5], 'a')
    result = wasserstein(a, EigenvalueSet([0.9, 0.5], 'b'))
    assert result.distance == 0.0
    assert result.assignment == (0, 1)


def test_swapped_sets_use_swapped_assignment():
    result = wasserstein(EigenvalueSet([0.9, 0.5]), EigenvalueSet([0.5, 0.9]))
    assert result.distance == 0.0
    assert result.assignment == (1, 0)


def test_single_pair_distance():
    result = wasserstein(EigenvalueSet([1.0]), EigenvalueSet([1j]))
    assert result.distance == pytest.approx(math.sqrt(2.0))


def test_ties_pick_lexicographically_smallest_assignment():
    # every assignment costs the same
    result = wasserstein(EigenvalueSet([0.0, 0.0, 0.0]), EigenvalueSet([1.0, 1.0, 1.0]))
    assert result.assignment == (0, 1, 2)
    assert result.distance == pytest.approx(1.0)


def test_distance_is_symmetric(rng):
    for _ in range(20):
        a, b = _random_set(rng, 6), _random_set(rng, 6)
        assert wasserstein(a, b).distance == wasserstein(b, a).distance


def test_assignment_matches_brute_force(rng):
    for trial in range(200):
        n = int(rng.integers(1, 8))
        a, b = _random_set(rng, n), _random_set(rng, n)
        diff = a.values[:, None] - b.values[None, :]
        cost = diff.real ** 2 + diff.imag ** 2
        perms = np.array(list(itertools.permutations(range(n))))
        totals = cost[np.arange(n)[None, :], perms].sum(axis=1)
        best = perms[np.argmin(totals)]
        expected = math.sqrt(math.fsum(cost[np.arange(n), best]) / n)
        result = wasserstein(a, b)
        assert result.distance == expected, trial
        assert result.assignment == tuple(int(j) for j in best), trial


def test_different_sizes_are_rejected():
    with pytest.raises(CardinalityError, match='semi_conjugacy'):
        wasserstein(EigenvalueSet([1.0, 0.5]), EigenvalueSet([1.0]))


def test_empty_and_non_finite_sets():
    with pytest.raises(CardinalityError):
        EigenvalueSet([])
    with pytest.raises(DataError):
        EigenvalueSet([1.0, np.inf])


def test_shuffle_control_identical_sets():
    a = EigenvalueSet([0.9, 0.5, 0.1 + 0.2j, 0.1 - 0.2j], 'a')
    result = shuffle_control(a, a, n_shuff=50, seed=1)
    assert result.distance == 0.0
    assert result.shuffle.frac_ge == 1.0
    assert result.verdict() == 'indistinguishable'


def test_shuffle_control_separated_sets():
    a = EigenvalueSet([0.95, 0.9, 0.85, 0.8, 0.75], 'a')
    b = EigenvalueSet([-0.5 + 0.5j, -0.5 - 0.5j, -0.4, -0.3 + 0.1j, -0.3 - 0.1j], 'b')
    result = shuffle_control(a, b, n_shuff=100, seed=0)
    assert all(distance < result.distance for distance in result.shuffle.distances)
    assert result.shuffle.frac_ge == 0.0
    assert result.verdict() == 'distinct'


def test_shuffle_patterns_exchange_two_pairs():
    for seed in range(5):
        for index in range(50):
            keep = compare._shuffle_pattern(seed, index, 10)
            assert 2 <= np.count_nonzero(keep) <= 8
            np.testing.assert_array_equal(keep, compare._shuffle_pattern(seed, index, 10))
    # short sets use the plain coins
    np.testing.assert_array_equal(compare._shuffle_pattern(4, 1, 3),
                                  compare.RandomStream.split(4, 1).coin_flips(3))


def test_near_coincident_pair_does_not_count_as_a_tie():
    a = EigenvalueSet([0.998562, 0.95, 0.9, 0.85, 0.8, 0.75, 0.7, 0.65, 0.6, 0.55], 'a')
    b = EigenvalueSet([1.0, -0.5, -0.52, -0.54, -0.56, -0.58, -0.6, -0.62, -0.64, -0.66], 'b')
    result = shuffle_control(a, b, n_shuff=100, seed=0)
    assert result.assignment == tuple(range(10))
    # exchanging the near pair alone keeps the observed pairing optimal
    keep = np.ones(10, dtype=bool)
    keep[0] = False
    first, second = compare._shuffled_sets(a.values, b.values, keep)
    assert compare._distance(first, second) == result.distance
    assert all(distance < result.distance for distance in result.shuffle.distances)
    assert result.shuffle.frac_ge == 0.0


def test_shuffle_control_is_seeded(rng):
    a, b = _random_set(rng, 8, 'a'), _random_set(rng, 8, 'b')
    first = shuffle_control(a, b, n_shuff=30, seed=5)
    assert first.shuffle.distances == shuffle_control(a, b, n_shuff=30, seed=5).shuffle.distances
    assert first.shuffle.distances != shuffle_control(a, b, n_shuff=30, seed=6).shuffle.distances
    assert first.meta['seed'] == 5


def test_shuffle_control_parallel_equals_serial(rng):
    a, b = _random_set(rng, 6, 'a'), _random_set(rng, 6, 'b')
    serial = shuffle_control(a, b, n_shuff=20, seed=2, workers=1)
    parallel = shuffle_control(a, b, n_shuff=20, seed=2, workers=2)
    assert serial.shuffle.distances == parallel.shuffle.distances


def test_shuffles_preserve_the_pooled_multiset(rng):
    for seed in range(10):
        a, b = _random_set(rng, 7), _random_set(rng, 7)
        base = wasserstein(a, b)
        b_matched = b.values[list(base.assignment)]
        keep = compare.RandomStream.split(seed, 0).coin_flips(7)
        first, second = compare._shuffled_sets(a.values, b_matched, keep)
        compare._ensure_union_preserved(a.values, b.values, first, second)
        shuffle_control(a, b, n_shuff=10, seed=seed)


def test_shuffle_count_must_be_positive():
    a = EigenvalueSet([1.0])
    with pytest.raises(ConfigError):
        shuffle_control(a, a, n_shuff=0)


def test_semi_conjugacy_subset():
    result = semi_conjugacy(EigenvalueSet([0.9, 0.5, 0.2]), EigenvalueSet([0.9, 0.5]), 1e-9)
    assert result.subset
    assert result.max_residual == 0.0
    assert sorted((i, j) for i, j, _ in result.matched_pairs) == [(0, 0), (1, 1)]


def test_semi_conjugacy_not_a_subset():
    result = semi_conjugacy(EigenvalueSet([0.9, 0.5, 0.2]), EigenvalueSet([0.9, -0.5]), 1e-3)
    assert not result.subset
    assert result.max_residual == pytest.approx(0.7)


def test_semi_conjugacy_needs_smaller_set():
    with pytest.raises(CardinalityError):
        semi_conjugacy(EigenvalueSet([0.9]), EigenvalueSet([0.9]), 1e-3)


def _brute_force_ks(x, y):
    pooled = np.concatenate((x, y))
    return max(abs(np.sum(x <= t) / float(len(x)) - np.sum(y <= t) / float(len(y))) for t in pooled)


def test_ks_matches_brute_force(rng):
    for _ in range(100):
        x = rng.standard_normal(int(rng.integers(1, 40)))
        y = rng.standard_normal(int(rng.integers(1, 40))) + rng.uniform(-1, 1)
        assert ks_two_sample(x, y).statistic == _brute_force_ks(x, y)


def test_ks_edge_cases():
    same = ks_two_sample([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert same.statistic == 0.0
    assert same.p_value == pytest.approx(1.0)
    apart = ks_two_sample(np.arange(50.), np.arange(50.) + 100)
    assert apart.statistic == 1.0
    assert apart.p_value < 1e-6
    with pytest.raises(CardinalityError):
        ks_two_sample([], [1.0])


def test_log10_floor():
    np.testing.assert_allclose(log10_clamped([[0.0, 1e-20], [10.0, 1.0]]), [[-16, -16], [1, 0]])


def test_window_matrix_stationary_input():
    ens = two_regime_ensemble(length=400, switch=400)
    decs = [dmd_rrr(delay_embed(w, 4)) for w in window(ens, WindowSpec(100))]
    matrix = window_distance_matrix(decs)
    assert matrix.labels == ('0:99', '100:199', '200:299', '300:399')
    assert np.max(matrix.distances) < 1e-6
    np.testing.assert_array_equal(matrix.distances, matrix.distances.T)


def test_window_matrix_two_regimes():
    ens = two_regime_ensemble()
    decs = [dmd_rrr(delay_embed(w, 4)) for w in window(ens, WindowSpec(100))]
    matrix = window_distance_matrix(decs, workers=1)
    assert matrix.distances.shape == (8, 8)
    logs = matrix.log10
    within = [logs[i, j] for block in (range(4), range(4, 8))
              for i in block for j in block if i < j]
    cross = [logs[i, j] for i in range(4) for j in range(4, 8)]
    assert np.mean(cross) - np.mean(within) >= 1.0
    assert np.min(matrix.distances[:4, 4:]) >= 10 * np.max(
        [matrix.distances[i, j] for i in range(8) for j in range(8)
         if i != j and (i < 4) == (j < 4)])


def test_window_matrix_rejects_mixed_mode_counts():
    decs = [handmade_spectrum([0.9, 0.5]), handmade_spectrum([0.9, 0.5]), handmade_spectrum([0.9])]
    with pytest.raises(CardinalityError, match='#2 has 1'):
        window_distance_matrix(decs)


def test_verdict_threshold():
    a = EigenvalueSet([0.95, 0.9, 0.85, 0.8, 0.75, 0.7, 0.65, 0.6, 0.55, 0.5], 'a')
    b = EigenvalueSet(-np.linspace(0.1, 0.9, 10), 'b')
    result = shuffle_control(a, b, n_shuff=100, seed=0)
    assert result.verdict(alpha=1.01) == 'distinct'
    assert result.verdict(alpha=0.0) == 'indistinguishable'
    with pytest.raises(ConfigError):
        wasserstein(a, b).verdict()


def test_wasserstein_two_point_example():
    result = wasserstein(EigenvalueSet([0.0, 1.0]), EigenvalueSet([1j, 1.0]))
    assert result.distance == pytest.approx(math.sqrt(0.5))
    assert result.assignment == (0, 1)


def test_triangle_inequality(rng):
    for _ in range(50):
        a, b, c = _random_set(rng, 5), _random_set(rng, 5), _random_set(rng, 5)
        assert wasserstein(a, c).distance <= (wasserstein(a, b).distance +
                                              wasserstein(b, c).distance + 1e-9)


def test_single_window_gives_zero_matrix():
    matrix = window_distance_matrix([handmade_spectrum([0.9, 0.5], meta={'window': (0, 99)})])
    assert matrix.distances.shape == (1, 1)
    assert matrix.distances[0, 0] == 0.0
    assert matrix.labels == ('0:99',)


def test_wasserstein_relabeling_and_conjugation_invariance(rng):
    for _ in range(30):
        a, b = _random_set(rng, 6), _random_set(rng, 6)
        distance = wasserstein(a, b).distance
        order = rng.permutation(6)
        relabeled = wasserstein(EigenvalueSet(a.values[order]), EigenvalueSet(b.values[order]))
        assert relabeled.distance == pytest.approx(distance, rel=1e-12)
        conjugated = wasserstein(EigenvalueSet(a.values.conj()), EigenvalueSet(b.values.conj()))
        assert conjugated.distance == pytest.approx(distance, rel=1e-12)
