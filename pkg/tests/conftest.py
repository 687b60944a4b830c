#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

import numpy as np
import pytest

from koopconj.spectral import SpectralDecomposition
from koopconj.trajectory import TrajectoryEnsemble


def stable_linear_system(rng, dim, radius=0.99):
    """
    Random real normal matrix with eigenvalues in the disk of ``radius``:
    real 1x1 blocks and 2x2 rotation blocks, conjugated by an orthogonal Q.
    Returns (A, eigenvalues).
    """
    blocks = np.zeros((dim, dim))
    eigenvalues = []
    i = 0
    while i < dim:
        magnitude = rng.uniform(0.2, radius)
        if i + 1 < dim and rng.uniform() < 0.5:
            angle = rng.uniform(0.2, np.pi - 0.2)
            re, im = magnitude * np.cos(angle), magnitude * np.sin(angle)
            blocks[i:i + 2, i:i + 2] = [[re, -im], [im, re]]
            eigenvalues.extend([complex(re, im), complex(re, -im)])
            i += 2
        else:
            sign = 1.0 if rng.uniform() < 0.5 else -1.0
            blocks[i, i] = sign * magnitude
            eigenvalues.append(complex(sign * magnitude, 0.0))
            i += 1
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q.dot(blocks).dot(q.T), np.array(eigenvalues)


def simulate_linear(a, x0s, length):
    trajectories = []
    for x0 in x0s:
        traj = np.empty((a.shape[0], length))
        traj[:, 0] = x0
        for t in range(1, length):
            traj[:, t] = a.dot(traj[:, t - 1])
        trajectories.append(traj)
    return trajectories


def linear_ensemble(rng, a, count, length, noise=0.0):
    trajectories = simulate_linear(a, rng.standard_normal((count, a.shape[0])), length)
    if noise:
        trajectories = [t + noise * rng.standard_normal(t.shape) for t in trajectories]
    return TrajectoryEnsemble(tuple(trajectories))


def two_regime_ensemble(length=800, switch=400, count=4, seed=7):
    """Decay by 0.9 until ``switch``, then a damped rotation (0.95, 0.3 rad)."""
    rng = np.random.default_rng(seed)
    decay = 0.9 * np.eye(2)
    c, s = 0.95 * np.cos(0.3), 0.95 * np.sin(0.3)
    rotation = np.array([[c, -s], [s, c]])
    trajectories = []
    for x0 in rng.standard_normal((count, 2)):
        traj = np.empty((2, length))
        traj[:, 0] = x0
        for t in range(1, length):
            a = decay if t <= switch else rotation
            traj[:, t] = a.dot(traj[:, t - 1])
        trajectories.append(traj)
    return TrajectoryEnsemble(tuple(trajectories))


def handmade_spectrum(eigenvalues, residuals=None, meta=None):
    eigenvalues = np.asarray(eigenvalues, dtype=complex)
    n = len(eigenvalues)
    residuals = np.zeros(n) if residuals is None else residuals
    return SpectralDecomposition(eigenvalues, np.eye(n, dtype=complex), residuals,
                                 np.ones((1, n), dtype=complex), n, meta or {})


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def small_ensemble():
    """Three 2-variable trajectories of 12 steps from a diagonal system."""
    a = np.diag([0.8, 0.5])
    return TrajectoryEnsemble(tuple(simulate_linear(a, [[1.0, 1.0], [2.0, -1.0], [-0.5, 3.0]], 12)))
