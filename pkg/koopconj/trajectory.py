#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
Trajectory ensembles and the snapshot matrices built from them.

An ensemble is a set of equal-length multivariate time series (optimizer
iterates, exported weight trajectories) stored as ``state_dim x length``
float64 arrays. Everything here is immutable: operations return new
ensembles, arrays are flagged read-only.
"""

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Tuple

import numpy as np

from koopconj.errors import (ConfigError, EmbeddingError, EmptyWindowError,
                             EnsembleError, PermutationError, RankError)
from koopconj.random_streams import RandomStream


log = logging.getLogger(__name__)


def _frozen(array):
    array = np.array(array, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


class EnsembleValidator(object):
    """
    Utility class to ensure that ensembles satisfy their invariants.
    """

    @staticmethod
    def check_ensemble_invalid(ens):
        """
        Check if an ensemble violates the shape/finiteness invariants.
        :returns: Problem as string, if any is found.
        :returns: None, if no problems are detected.
        """
        if not ens.trajectories:
            return 'ensemble holds no trajectories'
        shape = ens.trajectories[0].shape
        if len(shape) != 2 or shape[0] < 1 or shape[1] < 1:
            return 'trajectory %r has shape %r, expected (state_dim, length)' % (
                ens.labels[0], shape)
        for label, traj in zip(ens.labels, ens.trajectories):
            if traj.shape != shape:
                return 'trajectory %r has shape %r, expected %r' % (label, traj.shape, shape)
            bad = np.argwhere(~np.isfinite(traj))
            if bad.size:
                row, col = bad[0]
                return 'trajectory %r holds a non-finite value at variable %d, step %d' % (
                    label, row, col)
        if len(ens.labels) != len(ens.trajectories):
            return '%d labels given for %d trajectories' % (len(ens.labels), len(ens.trajectories))
        # -- EVERYTHING CHECKED: No problems detected.
        return None

    @classmethod
    def ensure_ensemble_valid(cls, ens):
        """
        :raises: EnsembleError, if any invariant is violated.
        """
        problem = cls.check_ensemble_invalid(ens)
        if problem:
            raise EnsembleError(problem)


@dataclass(frozen=True, eq=False)
class TrajectoryEnsemble:
    trajectories: Tuple[np.ndarray, ...]
    labels: Optional[Tuple[str, ...]] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        trajectories = tuple(_frozen(np.atleast_2d(t)) for t in self.trajectories)
        object.__setattr__(self, 'trajectories', trajectories)
        if self.labels is None:
            labels = tuple('traj-%d' % i for i in range(len(trajectories)))
        else:
            labels = tuple(str(label) for label in self.labels)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'meta', dict(self.meta))
        EnsembleValidator.ensure_ensemble_valid(self)

    @property
    def state_dim(self):
        return self.trajectories[0].shape[0]

    @property
    def length(self):
        return self.trajectories[0].shape[1]

    @property
    def iteration_offset(self):
        """Absolute iteration of column 0 (non-zero for windows)."""
        return int(self.meta.get('iteration_offset', 0))

    def __len__(self):
        return len(self.trajectories)

    def stack(self):
        """All samples side by side: ``state_dim x (count * length)``."""
        return np.hstack(self.trajectories)

    def derive(self, trajectories, **meta_updates):
        meta = dict(self.meta)
        meta.update(meta_updates)
        return TrajectoryEnsemble(tuple(trajectories), self.labels, meta)


@dataclass(frozen=True, eq=False)
class SnapshotPair:
    z: np.ndarray
    z_prime: np.ndarray
    delay_count: int
    column_counts: Tuple[int, ...]
    source_labels: Tuple[str, ...] = ()
    source_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'z', _frozen(self.z))
        object.__setattr__(self, 'z_prime', _frozen(self.z_prime))
        if self.z.shape != self.z_prime.shape:
            raise EmbeddingError('snapshot matrices differ in shape: %r vs %r' % (
                self.z.shape, self.z_prime.shape))
        if sum(self.column_counts) != self.z.shape[1]:
            raise EmbeddingError('column counts %r do not add up to %d columns' % (
                self.column_counts, self.z.shape[1]))

    @property
    def embed_dim(self):
        return self.z.shape[0]

    @property
    def col_count(self):
        return self.z.shape[1]

    @property
    def trajectory_starts(self):
        """Column index of each source trajectory's first snapshot."""
        return tuple(int(c) for c in np.concatenate(([0], np.cumsum(self.column_counts)[:-1])))


@dataclass(frozen=True, eq=False)
class WindowSpec:
    window_len: int
    stride: Optional[int] = None
    start: int = 0

    def __post_init__(self):
        if self.stride is None:
            object.__setattr__(self, 'stride', self.window_len)
        if self.window_len < 1 or self.stride < 1:
            raise ConfigError('window length and stride must be positive (got %r, %r)' % (
                self.window_len, self.stride))
        if self.start < 0:
            raise ConfigError('window start must be non-negative (got %r)' % self.start)

    def supports_delays(self, delay_count):
        return self.window_len >= delay_count + 2


def embed_points(traj, d):
    """
    Delay-embedded points of one trajectory, newest sample last:
    column t is [x(t); x(t+1); ...; x(t+d)].
    """
    length = traj.shape[1]
    return np.vstack([traj[:, k:length - d + k] for k in range(d + 1)])


def delay_embed(ens, d):
    """
    Build the snapshot pair (Z, Z') of an ensemble under ``d`` additional delays.
    Column j of Z' is the successor of column j of Z inside one trajectory.
    """
    if d < 0:
        raise EmbeddingError('delay count must be non-negative (got %d)' % d)
    zs = []
    z_primes = []
    counts = []
    for label, traj in zip(ens.labels, ens.trajectories):
        if traj.shape[1] < d + 2:
            raise EmbeddingError(
                'trajectory %r has %d samples; %d delays need at least %d' % (
                    label, traj.shape[1], d, d + 2))
        points = embed_points(traj, d)
        zs.append(points[:, :-1])
        z_primes.append(points[:, 1:])
        counts.append(points.shape[1] - 1)
    pair = SnapshotPair(np.hstack(zs), np.hstack(z_primes), d, tuple(counts),
                        ens.labels, dict(ens.meta, delays=d))
    log.debug('embedded %d trajectories with %d delays: %d x %d snapshots',
              len(ens), d, pair.embed_dim, pair.col_count)
    return pair


def window_label(ens):
    t1, t2 = ens.meta['window']
    return '%d:%d' % (t1, t2)


def window(ens, spec):
    """
    Every window [start + k*stride, start + k*stride + window_len) that fits
    inside the trajectories. Window meta carries absolute iteration intervals.
    """
    last_offset = ens.length - spec.window_len
    offsets = range(spec.start, last_offset + 1, spec.stride)
    if not offsets:
        raise EmptyWindowError(
            'no window of length %d starting at %d fits in trajectories of length %d' % (
                spec.window_len, spec.start, ens.length))
    base = ens.iteration_offset
    windows = []
    for offset in offsets:
        t1 = base + offset
        t2 = t1 + spec.window_len - 1
        trajs = [t[:, offset:offset + spec.window_len] for t in ens.trajectories]
        windows.append(ens.derive(trajs, iteration_offset=t1, window=(t1, t2)))
    return windows


class PcaReduction(NamedTuple):
    ensemble: TrajectoryEnsemble
    basis: np.ndarray
    explained_variance: np.ndarray
    mean: np.ndarray

    def lift(self, reduced=None):
        """Map reduced trajectories back into the original state space."""
        reduced = self.ensemble if reduced is None else reduced
        trajs = [self.basis.dot(t) + self.mean[:, None] for t in reduced.trajectories]
        return reduced.derive(trajs)

    @property
    def cumulative_variance(self):
        return np.cumsum(self.explained_variance)


def pca_reduce(ens, k):
    """
    Project every trajectory onto the top-k principal directions of the
    mean-centred data pooled over all time points and trajectories.
    """
    data = ens.stack()
    limit = min(data.shape)
    if k < 1 or k > limit:
        raise RankError('%d components requested; at most %d are attainable' % (k, limit),
                        attainable_rank=limit)
    mean = data.mean(axis=1)
    centred = data - mean[:, None]
    u, s, _ = np.linalg.svd(centred, full_matrices=False)
    attainable = int(np.sum(s > s[0] * max(centred.shape) * np.finfo(float).eps)) if s[0] > 0 else 0
    if k > attainable:
        raise RankError('%d components requested; the centred data has rank %d' % (k, attainable),
                        attainable_rank=attainable)
    basis = u[:, :k]
    # sign convention: largest-magnitude entry of each direction is positive
    signs = np.sign(basis[np.argmax(np.abs(basis), axis=0), np.arange(k)])
    basis = basis * signs
    explained = (s[:k] ** 2) / np.sum(s ** 2)
    reduced = [basis.T.dot(t - mean[:, None]) for t in ens.trajectories]
    out = ens.derive(reduced, pca_components=k, pca_source_dim=ens.state_dim)
    log.info('PCA %d -> %d dims, %.4f of variance kept', ens.state_dim, k, float(np.sum(explained)))
    return PcaReduction(out, _frozen(basis), _frozen(explained), _frozen(mean))


def permute_state(ens, sigma):
    """
    Relabel the state variables: row i of the result is row sigma[i] of the
    input (0-based). The composed permutation is kept in meta.
    """
    sigma = [int(s) for s in sigma]
    if sorted(sigma) != list(range(ens.state_dim)):
        raise PermutationError('%r is not a permutation of range(%d)' % (sigma, ens.state_dim))
    previous = ens.meta.get('permutation', list(range(ens.state_dim)))
    composed = [previous[s] for s in sigma]
    return ens.derive([t[sigma, :] for t in ens.trajectories], permutation=composed)


def perturb_multipliers(state_dim, eps, seed):
    """
    Multipliers 1 + eps * N(0, 1) for building perturbed initializations
    W0 * multipliers in an external trainer.
    """
    if eps <= 0:
        raise ConfigError('perturbation scale must be positive (got %r)' % eps)
    if state_dim < 1:
        raise ConfigError('state dimension must be positive (got %r)' % state_dim)
    return 1.0 + eps * RandomStream(seed).standard_normal(state_dim)
