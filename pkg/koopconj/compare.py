#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
Conjugacy verdicts from Koopman spectra.

Two processes are judged topologically conjugate when their eigenvalue
multisets coincide. Closeness is measured with the order-2 Wasserstein
distance between the sets (an optimal assignment in the complex plane),
significance with a randomized shuffle of matched pairs, and
semi-conjugacy with a rectangular assignment of the smaller set into the
larger one.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import scipy.special
from scipy.optimize import linear_sum_assignment

from koopconj import core
from koopconj.errors import CardinalityError, ConfigError, DataError, KoopConjError
from koopconj.random_streams import RandomStream


log = logging.getLogger(__name__)

DEFAULT_SHUFFLES = 100
# fewest matched pairs a shuffle exchanges (sets of four or more)
MIN_MOVED_PAIRS = 2
LOG10_FLOOR = 1e-16

# relative slack when deciding whether two assignment costs tie
_TIE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class EigenvalueSet:
    values: np.ndarray
    label: str = ''
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.array(self.values, dtype=complex, copy=True).ravel()
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'meta', dict(self.meta))
        if values.size == 0:
            raise CardinalityError('eigenvalue set %r is empty' % self.label)
        if not np.all(np.isfinite(values)):
            raise DataError('eigenvalue set %r holds non-finite values' % self.label)

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_decomposition(cls, dec, label=None):
        if label is None:
            label = dec.meta.get('label', '')
        return cls(dec.eigenvalues, label, dict(dec.meta))


@dataclass(frozen=True)
class ShuffleRecord:
    n_shuff: int
    seed: int
    frac_ge: float
    distances: Tuple[float, ...]


@dataclass(frozen=True)
class SpectrumComparison:
    distance: float
    assignment: Tuple[int, ...]
    shuffle: Optional[ShuffleRecord] = None
    meta: dict = field(default_factory=dict)

    def verdict(self, alpha=0.05):
        """
        'distinct' when fewer than ``alpha`` of the shuffles are at least as
        far apart as the true spectra, else 'indistinguishable'.
        """
        if self.shuffle is None:
            raise ConfigError('verdict needs a shuffle control')
        return 'distinct' if self.shuffle.frac_ge < alpha else 'indistinguishable'


@dataclass(frozen=True)
class SemiConjugacyResult:
    subset: bool
    matched_pairs: Tuple[Tuple[int, int, float], ...]
    max_residual: float


@dataclass(frozen=True)
class KSResult:
    statistic: float
    p_value: float


@dataclass(frozen=True, eq=False)
class WindowDistances:
    distances: np.ndarray
    log10: np.ndarray
    labels: Tuple[str, ...]


def _cost_matrix(rows, cols):
    diff = rows[:, None] - cols[None, :]
    return diff.real ** 2 + diff.imag ** 2


def _optimal_cost(cost):
    if cost.size == 0:
        return 0.0
    row_ind, col_ind = linear_sum_assignment(cost)
    return math.fsum(cost[row_ind, col_ind])


def _lexicographic_assignment(cost):
    """
    Optimal square assignment; among optimal ones the lexicographically
    smallest sequence of column indices. Returns (columns, total cost).
    """
    n = cost.shape[0]
    best = _optimal_cost(cost)
    slack = _TIE_RTOL * max(best, 1.0)
    free = list(range(n))
    chosen = []
    fixed = 0.0
    for row in range(n):
        rest_rows = list(range(row + 1, n))
        for col in free:
            rest_cols = [c for c in free if c != col]
            total = fixed + cost[row, col] + _optimal_cost(cost[np.ix_(rest_rows, rest_cols)])
            if total <= best + slack:
                chosen.append(col)
                fixed += cost[row, col]
                free.remove(col)
                break
        else:
            raise KoopConjError('assignment refinement lost the optimum at row %d' % row)
    total = math.fsum(cost[np.arange(n), chosen])
    return tuple(chosen), total


def _check_same_size(a, b):
    if len(a) != len(b):
        raise CardinalityError(
            'eigenvalue sets %r (%d) and %r (%d) differ in size; use semi_conjugacy '
            'for subset tests between spectra of different sizes' % (a.label, len(a), b.label, len(b)))


def _distance(values_a, values_b):
    return float(np.sqrt(_optimal_cost(_cost_matrix(values_a, values_b)) / len(values_a)))


def wasserstein(a, b):
    """
    Order-2 Wasserstein distance between equal-size eigenvalue sets:
    sqrt(min_sigma (1/N) sum_i |a_i - b_sigma(i)|^2). ``assignment[i]`` is the
    index in ``b`` matched to ``a[i]``.
    """
    _check_same_size(a, b)
    assignment, total = _lexicographic_assignment(_cost_matrix(a.values, b.values))
    distance = float(np.sqrt(total / len(a)))
    return SpectrumComparison(distance, assignment, None, {'a': a.label, 'b': b.label})


def semi_conjugacy(big, small, tol):
    """
    Test whether ``small`` is (up to ``tol`` per matched pair) a subset of
    ``big``, the eigenvalue signature of a semi-conjugacy.
    """
    if len(small) >= len(big):
        raise CardinalityError('semi-conjugacy needs |small| < |big| (got %d and %d)' % (
            len(small), len(big)))
    if tol < 0:
        raise ConfigError('tolerance must be non-negative (got %r)' % tol)
    cost = _cost_matrix(small.values, big.values)
    row_ind, col_ind = linear_sum_assignment(cost)
    distances = np.sqrt(cost[row_ind, col_ind])
    pairs = tuple((int(i), int(j), float(d)) for i, j, d in zip(row_ind, col_ind, distances))
    max_residual = float(distances.max())
    return SemiConjugacyResult(bool(max_residual <= tol), pairs, max_residual)


def _shuffled_sets(a_values, b_matched, keep):
    first = np.where(keep, a_values, b_matched)
    second = np.where(keep, b_matched, a_values)
    return first, second


def _ensure_union_preserved(a_values, b_values, first, second):
    before = np.sort_complex(np.concatenate((a_values, b_values)))
    after = np.sort_complex(np.concatenate((first, second)))
    if not np.array_equal(before, after):
        raise KoopConjError('shuffle changed the pooled eigenvalue multiset')


def _moved_pairs(keep):
    """Matched pairs a shuffle exchanges, counted up to a global swap of the sets."""
    swapped = int(np.count_nonzero(~keep))
    return min(swapped, len(keep) - swapped)


def _shuffle_pattern(seed, index, n):
    """
    Keep/swap coins for shuffle ``index``. With four or more pairs a draw
    must exchange at least MIN_MOVED_PAIRS pairs; other draws are redrawn
    from the same stream.
    """
    stream = RandomStream.split(seed, index)
    keep = stream.coin_flips(n)
    if n >= 2 * MIN_MOVED_PAIRS:
        while _moved_pairs(keep) < MIN_MOVED_PAIRS:
            keep = stream.coin_flips(n)
    return keep


def _shuffle_distance(task):
    a_values, b_values, b_matched, seed, index = task
    keep = _shuffle_pattern(seed, index, len(a_values))
    first, second = _shuffled_sets(a_values, b_matched, keep)
    _ensure_union_preserved(a_values, b_values, first, second)
    return _distance(first, second)


def shuffle_control(a, b, n_shuff=DEFAULT_SHUFFLES, seed=0, workers=None):
    """
    Randomized shuffle control. Each shuffle flips a fair coin per matched
    pair (a_i, b_sigma(i)) and either keeps it or swaps the two eigenvalues
    between the sets; draws exchanging fewer than MIN_MOVED_PAIRS pairs are
    redrawn. The observed pairing stays available, so every shuffled
    distance is at most the true one and frac_ge counts the shuffles that
    tie it.
    """
    _check_same_size(a, b)
    if n_shuff < 1:
        raise ConfigError('at least one shuffle is needed (got %r)' % n_shuff)
    base = wasserstein(a, b)
    b_matched = b.values[list(base.assignment)]
    tasks = [(a.values, b.values, b_matched, seed, i) for i in range(n_shuff)]
    distances = core.parallel_map(_shuffle_distance, tasks, workers)
    exceed = sum(1 for d in distances if d >= base.distance)
    record = ShuffleRecord(int(n_shuff), int(seed), exceed / float(n_shuff), tuple(distances))
    log.info('%s vs %s: W2 = %.6g, %d/%d shuffles at least as far', a.label, b.label,
             base.distance, exceed, n_shuff)
    return SpectrumComparison(base.distance, base.assignment, record, dict(base.meta, seed=int(seed)))


def ks_two_sample(x, y):
    """
    Two-sample Kolmogorov-Smirnov test: D = sup_t |F_x(t) - F_y(t)| and the
    asymptotic p-value from the Kolmogorov distribution at sqrt(n_e) * D.
    """
    x = np.sort(np.asarray(x, dtype=float).ravel())
    y = np.sort(np.asarray(y, dtype=float).ravel())
    if x.size == 0 or y.size == 0:
        raise CardinalityError('KS test needs two non-empty samples (got %d and %d)' % (x.size, y.size))
    pooled = np.concatenate((x, y))
    cdf_x = np.searchsorted(x, pooled, side='right') / float(x.size)
    cdf_y = np.searchsorted(y, pooled, side='right') / float(y.size)
    statistic = float(np.max(np.abs(cdf_x - cdf_y)))
    n_e = x.size * y.size / float(x.size + y.size)
    p_value = float(scipy.special.kolmogorov(np.sqrt(n_e) * statistic))
    return KSResult(statistic, p_value)


def _pair_distance(task):
    a_values, b_values = task
    return _distance(a_values, b_values)


def _decomposition_label(index, dec):
    window = dec.window
    if window is not None:
        return '%d:%d' % window
    return dec.meta.get('label', str(index))


def window_distance_matrix(specs, workers=None):
    """
    Pairwise Wasserstein distances between the spectra of ``specs`` (usually
    one decomposition per window) and their log10, floored at 1e-16.
    """
    specs = list(specs)
    if not specs:
        raise CardinalityError('no decompositions to compare')
    counts = [dec.mode_count for dec in specs]
    expected = max(set(counts), key=counts.count)
    offenders = [(i, c) for i, c in enumerate(counts) if c != expected]
    if offenders:
        raise CardinalityError('decompositions retain different mode counts (expected %d): %s' % (
            expected, ', '.join('#%d has %d' % o for o in offenders)))
    n = len(specs)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    values = core.parallel_map(
        _pair_distance, [(specs[i].eigenvalues, specs[j].eigenvalues) for i, j in pairs], workers)
    distances = np.zeros((n, n))
    for (i, j), value in zip(pairs, values):
        distances[i, j] = distances[j, i] = value
    labels = tuple(_decomposition_label(i, dec) for i, dec in enumerate(specs))
    return WindowDistances(distances, log10_clamped(distances), labels)


def log10_clamped(matrix):
    return np.log10(np.maximum(np.asarray(matrix, dtype=float), LOG10_FLOOR))
