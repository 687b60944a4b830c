#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
Koopman mode decomposition from snapshot pairs.

``dmd_rrr`` is the reduced-SVD DMD with refined Ritz vectors and exact
residuals: the Rayleigh quotient of Z' on the leading left singular subspace
of Z gives the eigenvalues; each mode is the vector of that subspace that
minimises the residual for its eigenvalue.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from koopconj.errors import (ConfigError, DegenerateDataError, RankCollapseError)


log = logging.getLogger(__name__)

INSIDE = 'inside'
ON = 'on'
OUTSIDE = 'outside'


@dataclass(frozen=True)
class DecompositionConfig:
    rank: int = 10
    svd_rel_tol: float = 1e-12
    residual_tol: Optional[float] = None
    scale_columns: bool = True

    def __post_init__(self):
        problem = self.check_config_invalid()
        if problem:
            raise ConfigError(problem)

    def check_config_invalid(self):
        if int(self.rank) != self.rank or self.rank < 1:
            return 'rank must be a positive integer (got %r)' % (self.rank,)
        if not self.svd_rel_tol >= 0:
            return 'svd_rel_tol must be non-negative (got %r)' % (self.svd_rel_tol,)
        if self.residual_tol is not None and not self.residual_tol >= 0:
            return 'residual_tol must be non-negative (got %r)' % (self.residual_tol,)
        return None


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    modes: np.ndarray
    residuals: np.ndarray
    amplitudes: np.ndarray
    rank: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, dtype in (('eigenvalues', complex), ('modes', complex),
                            ('residuals', float), ('amplitudes', complex)):
            value = np.array(getattr(self, name), dtype=dtype, copy=True)
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        object.__setattr__(self, 'meta', dict(self.meta))
        n = len(self.eigenvalues)
        if len(self.residuals) != n or self.modes.shape[1] != n:
            raise ConfigError('%d eigenvalues, %d residuals and %d modes do not match' % (
                n, len(self.residuals), self.modes.shape[1]))

    @property
    def mode_count(self):
        return len(self.eigenvalues)

    @property
    def embed_dim(self):
        return self.modes.shape[0]

    @property
    def window(self):
        window = self.meta.get('window')
        return tuple(window) if window is not None else None

    def eigenvalue_set(self, label=None):
        from koopconj.compare import EigenvalueSet
        return EigenvalueSet.from_decomposition(self, label)


def _spectral_order(eigenvalues):
    # magnitude desc, then real desc, then imaginary desc
    return np.lexsort((-eigenvalues.imag, -eigenvalues.real, -np.abs(eigenvalues)))


def _refine(rayleigh_image, basis, eigenvalue):
    """
    Refined Ritz vector for one eigenvalue: the unit w minimising
    ||(Z' V S^-1 - lambda U) w||; returns (mode, residual).
    """
    pencil = rayleigh_image - eigenvalue * basis
    _, sigma, vh = np.linalg.svd(pencil, full_matrices=False)
    w = vh[-1].conj()
    return basis.dot(w), float(sigma[-1])


def dmd_rrr(pair, cfg=None):
    """
    Decompose a snapshot pair. Eigenvalues are returned sorted by descending
    magnitude, then descending real part, then descending imaginary part.
    """
    cfg = cfg or DecompositionConfig()
    z = np.asarray(pair.z)
    z_prime = np.asarray(pair.z_prime)
    if z.shape[1] < 2:
        raise DegenerateDataError('at least 2 snapshot columns are needed (got %d)' % z.shape[1])
    if not np.any(z):
        raise DegenerateDataError('snapshot matrix Z is identically zero')

    if cfg.scale_columns:
        norms = np.linalg.norm(z, axis=0)
        norms[norms == 0] = 1.0
        z = z / norms
        z_prime = z_prime / norms

    u, s, vh = np.linalg.svd(z, full_matrices=False)
    numerical_rank = int(np.sum(s > cfg.svd_rel_tol * s[0]))
    k = min(cfg.rank, numerical_rank)
    if k == 0:
        raise RankCollapseError('no singular value of Z exceeds %g relative to the largest' %
                                cfg.svd_rel_tol)
    u_k = u[:, :k]
    image = z_prime.dot(vh[:k].conj().T) / s[:k]
    rayleigh = u_k.conj().T.dot(image)
    eigenvalues = scipy.linalg.eig(rayleigh, right=False)

    modes = np.empty((u_k.shape[0], k), dtype=complex)
    residuals = np.empty(k)
    for i, eigenvalue in enumerate(eigenvalues):
        modes[:, i], residuals[i] = _refine(image, u_k, eigenvalue)

    keep = np.ones(k, dtype=bool)
    if cfg.residual_tol is not None:
        keep = residuals <= cfg.residual_tol
        if not np.any(keep):
            raise RankCollapseError('every mode has residual above %g (smallest %g)' % (
                cfg.residual_tol, residuals.min()))
        log.info('residual pruning kept %d of %d modes', int(keep.sum()), k)
    eigenvalues, modes, residuals = eigenvalues[keep], modes[:, keep], residuals[keep]

    order = _spectral_order(eigenvalues)
    eigenvalues, modes, residuals = eigenvalues[order], modes[:, order], residuals[order]

    # amplitudes from each trajectory's first embedded snapshot
    first = np.asarray(pair.z)[:, list(pair.trajectory_starts)]
    amplitudes = np.linalg.lstsq(modes, first.astype(complex), rcond=None)[0].T

    meta = dict(pair.source_meta)
    meta.update(delays=pair.delay_count, source_labels=list(pair.source_labels),
                numerical_rank=numerical_rank)
    log.debug('DMD-RRR: rank %d (numerical %d), %d modes kept', k, numerical_rank, len(eigenvalues))
    return SpectralDecomposition(eigenvalues, modes, residuals, amplitudes, k, meta)


def reconstruct(dec, steps, traj_index):
    """
    Real part of sum_i b_i lambda_i^t v_i for t = 0..steps-1, where b are the
    amplitudes of trajectory ``traj_index``.
    """
    if steps < 1:
        raise ConfigError('steps must be positive (got %r)' % steps)
    if not 0 <= traj_index < len(dec.amplitudes):
        raise IndexError('trajectory index %d out of range (%d amplitude sets)' % (
            traj_index, len(dec.amplitudes)))
    powers = dec.eigenvalues[:, None] ** np.arange(steps)[None, :]
    return dec.modes.dot(dec.amplitudes[traj_index][:, None] * powers).real


def unit_circle_classification(dec, tol):
    if tol < 0:
        raise ConfigError('tolerance must be non-negative (got %r)' % tol)
    tags = []
    for magnitude in np.abs(dec.eigenvalues):
        if magnitude < 1.0 - tol:
            tags.append(INSIDE)
        elif magnitude > 1.0 + tol:
            tags.append(OUTSIDE)
        else:
            tags.append(ON)
    return tags


@dataclass(frozen=True)
class SpectrumStructure:
    mode_count: int
    real: int
    positive_real: int
    complex_pairs: int
    inside: int
    on: int
    outside: int

    @property
    def all_real_positive(self):
        return self.positive_real == self.mode_count


def describe_spectrum(dec, tol=1e-8):
    """
    Counts that characterise a spectrum's structure (real vs oscillatory,
    stable vs unstable); imaginary parts up to ``tol`` count as real.
    """
    values = dec.eigenvalues
    real = np.abs(values.imag) <= tol
    upper = int(np.sum(values.imag > tol))
    lower = int(np.sum(values.imag < -tol))
    tags = unit_circle_classification(dec, tol)
    return SpectrumStructure(
        mode_count=len(values),
        real=int(np.sum(real)),
        positive_real=int(np.sum(real & (values.real > 0))),
        complex_pairs=min(upper, lower),
        inside=tags.count(INSIDE),
        on=tags.count(ON),
        outside=tags.count(OUTSIDE),
    )
