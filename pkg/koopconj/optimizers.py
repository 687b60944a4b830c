#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
Reference optimizers used as known-answer dynamical systems.

Online mirror descent (OMD) with the log-barrier regularizer
R(x) = -sum(log x) is conjugate to online gradient descent (OGD) on the
reparameterized objective f(exp(u)); the bisection method (BM) is not
conjugate to either. Running all three from grids of initial conditions
gives trajectory ensembles whose Koopman spectra should reproduce that
verdict.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from koopconj.errors import (BracketError, ConfigError, DomainError, KoopConjError,
                             NonFiniteError, StepSingularityError)
from koopconj.script_loader import ObjectiveValidator, ScriptLoader
from koopconj.trajectory import TrajectoryEnsemble


log = logging.getLogger(__name__)

OMD = 'omd'
OGD = 'ogd'
BM = 'bm'
ALGORITHMS = (OMD, OGD, BM)

SUM_TAN = 'sum_tan'
SUM_QUARTIC = 'sum_quartic'
CUSTOM = 'custom'

# initial-condition grids, each crossed with itself
OMD_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)
OGD_GRID = (-2.30, -1.75, -1.20, -0.65, -0.10)
BM_A_GRID = (-16 / 12., -13 / 12., -10 / 12., -7 / 12., -4 / 12.)
BM_B_GRID = (1 / 7., 0.393, 0.643, 0.893, 8 / 7.)

DEFAULT_DIM = 2
DEFAULT_ETA = 0.01
DEFAULT_STEPS = 100


def _tan_value(x):
    return float(np.sum(np.tan(x)))


def _tan_gradient(x):
    return 1.0 / np.cos(x) ** 2


def _quartic_value(x):
    return float(np.sum(x ** 4))


def _quartic_gradient(x):
    return 4.0 * x ** 3


@dataclass(frozen=True, eq=False)
class Objective:
    kind: str
    dim: int
    value: Callable
    gradient: Callable

    def __call__(self, x):
        return self.value(np.asarray(x, dtype=float))


def sum_tan(dim=DEFAULT_DIM):
    return Objective(SUM_TAN, dim, _tan_value, _tan_gradient)


def sum_quartic(dim=DEFAULT_DIM):
    return Objective(SUM_QUARTIC, dim, _quartic_value, _quartic_gradient)


def custom_objective(script_path, dim=DEFAULT_DIM):
    module = ScriptLoader.load(script_path)
    ObjectiveValidator.ensure_module_valid(module)
    return Objective(CUSTOM, dim, module.value, module.gradient)


def objective_by_name(name, dim=DEFAULT_DIM, script=None):
    """``tan``/``sum_tan``, ``quartic``/``sum_quartic`` or ``custom`` (needs ``script``)."""
    name = {'tan': SUM_TAN, 'quartic': SUM_QUARTIC}.get(name, name)
    if name == SUM_TAN:
        return sum_tan(dim)
    if name == SUM_QUARTIC:
        return sum_quartic(dim)
    if name == CUSTOM:
        if not script:
            raise ConfigError('a custom objective needs an objective script')
        return custom_objective(script, dim)
    raise ConfigError('unknown objective %r' % name)


@dataclass(frozen=True, eq=False)
class BoxDomain:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lo, dtype=float, ndmin=1)
        hi = np.array(self.hi, dtype=float, ndmin=1)
        if lo.shape != hi.shape or not np.all(lo < hi):
            raise ConfigError('box bounds must satisfy lo < hi coordinate-wise (got %r, %r)' % (
                lo.tolist(), hi.tolist()))
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)

    @classmethod
    def cube(cls, lo, hi, dim):
        return cls(np.full(dim, lo), np.full(dim, hi))

    def contains(self, x):
        return bool(np.all((x >= self.lo) & (x <= self.hi)))

    def project(self, x):
        """
        Per-coordinate clamp: the Euclidean projection onto the box, and the
        Bregman projection for any separable strictly convex regularizer.
        """
        return np.clip(x, self.lo, self.hi)


def default_domain(algorithm, dim=DEFAULT_DIM):
    if algorithm == OMD:
        return BoxDomain.cube(0.01, 1.0, dim)
    if algorithm == OGD:
        return BoxDomain.cube(-4.6, 0.0, dim)
    if algorithm == BM:
        return BoxDomain.cube(-4 / 3., 8 / 7., dim)
    raise ConfigError('unknown optimizer %r' % algorithm)


# keywords for the built-in grid in place of a grid file
BUILTIN_GRIDS = ('paper', 'builtin')


def builtin_grid(algorithm):
    """
    The 25 built-in initial conditions. BM brackets pair the a- and b-grids
    index-wise, each a(0) and b(0) used once.
    """
    if algorithm == OMD:
        return [np.array(p) for p in itertools.product(OMD_GRID, repeat=2)]
    if algorithm == OGD:
        return [np.array(p) for p in itertools.product(OGD_GRID, repeat=2)]
    if algorithm == BM:
        a_points = itertools.product(BM_A_GRID, repeat=2)
        b_points = itertools.product(BM_B_GRID, repeat=2)
        return [(np.array(a), np.array(b)) for a, b in zip(a_points, b_points)]
    raise ConfigError('unknown optimizer %r' % algorithm)


def grid_inits(algorithm, rows):
    """Initial conditions from grid rows; BM rows split into (a, b) halves."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if algorithm != BM:
        return [row.copy() for row in rows]
    if rows.shape[1] % 2:
        raise ConfigError('bisection grid rows need a(0) and b(0) of equal size (got %d columns)' %
                          rows.shape[1])
    half = rows.shape[1] // 2
    return [(row[:half].copy(), row[half:].copy()) for row in rows]


def omd_step(x, f, eta, domain):
    """
    One OMD step under the log barrier, in closed form
    y = x / (1 + eta * x * grad f(x)), followed by the projection onto K.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError('OMD iterate must lie in the positive orthant (got %r)' % x.tolist())
    denominator = 1.0 + eta * x * f.gradient(x)
    if np.any(denominator == 0):
        raise StepSingularityError('OMD step is singular at %r; use a smaller learning rate' % x.tolist())
    y = x / denominator
    if not np.all(np.isfinite(y)):
        raise NonFiniteError('OMD step produced non-finite values at %r' % x.tolist())
    return domain.project(y)


def ogd_step(u, f, eta, domain):
    """One OGD step on f(exp(u)), followed by the projection onto K'."""
    u = np.asarray(u, dtype=float)
    x = np.exp(u)
    v = u - eta * x * f.gradient(x)
    if not np.all(np.isfinite(v)):
        raise NonFiniteError('OGD step produced non-finite values at %r' % u.tolist())
    return domain.project(v)


def bm_step(a, b, f):
    """
    One bisection step: z = (a + b) / 2 replaces a when f(z) < 0, b otherwise
    (f(z) == 0 included). Returns (a', b', z).
    """
    z = (np.asarray(a, dtype=float) + np.asarray(b, dtype=float)) / 2.0
    if f.value(z) < 0:
        return z, np.asarray(b, dtype=float), z
    return np.asarray(a, dtype=float), z, z


@dataclass(frozen=True, eq=False)
class OptimizerConfig:
    algorithm: str
    objective: Objective
    eta: float = DEFAULT_ETA
    steps: int = DEFAULT_STEPS
    inits: Optional[Tuple] = None
    domain: Optional[BoxDomain] = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError('unknown optimizer %r (choose from %s)' % (
                self.algorithm, ', '.join(ALGORITHMS)))
        if self.algorithm == BM and self.objective.kind == SUM_QUARTIC:
            raise ConfigError('the bisection method needs f(a) < 0 < f(b); the quartic objective '
                              'is symmetric around its minimum and never satisfies f(a) < 0')
        if self.steps < 1:
            raise ConfigError('steps must be positive (got %r)' % self.steps)
        if self.algorithm != BM and not self.eta > 0:
            raise ConfigError('learning rate must be positive (got %r)' % self.eta)
        if self.inits is None:
            object.__setattr__(self, 'inits', tuple(builtin_grid(self.algorithm)))
        if self.domain is None:
            object.__setattr__(self, 'domain', default_domain(self.algorithm, self.objective.dim))


@dataclass(frozen=True, eq=False)
class OptimizerRun:
    config: OptimizerConfig
    trajectory: TrajectoryEnsemble
    losses: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def algorithm(self):
        return self.config.algorithm


def _iterate(config, init):
    f = config.objective
    states = np.empty((f.dim, config.steps))
    losses = np.empty(config.steps)
    if config.algorithm == BM:
        a, b = (np.asarray(p, dtype=float) for p in init)
        if not (f.value(a) < 0 < f.value(b)):
            raise BracketError('f(a) = %g and f(b) = %g do not bracket a root' % (
                f.value(a), f.value(b)))
        for t in range(config.steps):
            try:
                a, b, z = bm_step(a, b, f)
            except KoopConjError as e:
                raise type(e)('step %d: %s' % (t, e))
            states[:, t] = z
            losses[t] = f.value(z)
        return states, losses

    point = np.asarray(init, dtype=float)
    step = omd_step if config.algorithm == OMD else ogd_step
    for t in range(config.steps):
        if t > 0:
            try:
                point = step(point, f, config.eta, config.domain)
            except KoopConjError as e:
                raise type(e)('step %d: %s' % (t, e))
        states[:, t] = point
        losses[t] = f.value(np.exp(point) if config.algorithm == OGD else point)
    return states, losses


def run(config):
    """
    Iterate every initial condition for ``config.steps`` recorded steps
    (the first record is the initial iterate; BM records z(t)). OGD losses
    are f(exp(u)) so they compare directly with OMD losses.
    """
    trajectories = []
    losses = []
    for index, init in enumerate(config.inits):
        try:
            states, loss = _iterate(config, init)
        except KoopConjError as e:
            raise type(e)('%s trajectory %d, %s' % (config.algorithm, index, e))
        trajectories.append(states)
        losses.append(loss)
    labels = ['%s-%02d' % (config.algorithm, i) for i in range(len(trajectories))]
    meta = {'source': 'simulate', 'optimizer': config.algorithm,
            'objective': config.objective.kind, 'eta': config.eta, 'steps': config.steps}
    ensemble = TrajectoryEnsemble(tuple(trajectories), tuple(labels), meta)
    log.info('%s on %s: %d trajectories of %d steps', config.algorithm, config.objective.kind,
             len(trajectories), config.steps)
    return OptimizerRun(config, ensemble, np.array(losses), meta)


def conjugacy_deviation(objective, x0s, eta, horizon=1.0):
    """
    Max over time and trajectories of ||exp(u(t)) - x(t)||_inf when OMD starts
    at x(0) and OGD at u(0) = ln x(0), over horizon/eta steps (a fixed
    stretch of continuous time). First-order conjugacy makes this O(eta).
    """
    x0s = [np.asarray(x, dtype=float) for x in x0s]
    steps = int(round(horizon / eta)) + 1
    omd = run(OptimizerConfig(OMD, objective, eta, steps, tuple(x0s)))
    ogd = run(OptimizerConfig(OGD, objective, eta, steps, tuple(np.log(x) for x in x0s)))
    deviation = 0.0
    for x, u in zip(omd.trajectory.trajectories, ogd.trajectory.trajectories):
        deviation = max(deviation, float(np.max(np.abs(np.exp(u) - x))))
    return deviation


def simulate(algorithm, objective=SUM_TAN, eta=DEFAULT_ETA, steps=DEFAULT_STEPS, grid_rows=None,
             objective_script=None):
    """
    Build and run one optimizer configuration by name. ``grid_rows`` replaces
    the built-in grid; its width sets the problem dimension.
    """
    inits = None
    dim = DEFAULT_DIM
    if grid_rows is not None:
        rows = np.atleast_2d(np.asarray(grid_rows, dtype=float))
        inits = tuple(grid_inits(algorithm, rows))
        dim = rows.shape[1] // 2 if algorithm == BM else rows.shape[1]
    f = objective_by_name(objective, dim, objective_script)
    return run(OptimizerConfig(algorithm, f, eta, steps, inits))
