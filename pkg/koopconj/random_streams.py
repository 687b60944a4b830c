#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
Seeded random streams.

All randomness in the package comes from RandomStream: a PCG64 bit generator
seeded explicitly, uniform draws in [0, 1), and Gaussian draws produced with the
Box-Muller transform from those uniforms. Streams for independent work items
(one per shuffle, one per window) are split by index with ``RandomStream.split``
so that a parallel run consumes exactly the same numbers as a serial one.
"""

import numpy as np


class RandomStream(object):

    def __init__(self, seed, index=None):
        self.seed = int(seed)
        self.index = index
        if index is None:
            seed_seq = np.random.SeedSequence(self.seed)
        else:
            seed_seq = np.random.SeedSequence(self.seed, spawn_key=(int(index),))
        self._generator = np.random.Generator(np.random.PCG64(seed_seq))

    @classmethod
    def split(cls, seed, index):
        """Independent stream for work item ``index`` under ``seed``."""
        return cls(seed, index)

    def uniform(self, size):
        return self._generator.random(size)

    def coin_flips(self, size):
        """Fair coins: True with probability 1/2."""
        return self.uniform(size) < 0.5

    def standard_normal(self, size):
        size = int(size)
        n_pairs = (size + 1) // 2
        # 1 - U lies in (0, 1], keeps the log finite
        u1 = 1.0 - self.uniform(n_pairs)
        u2 = self.uniform(n_pairs)
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        draws = np.empty(2 * n_pairs)
        draws[0::2] = radius * np.cos(angle)
        draws[1::2] = radius * np.sin(angle)
        return draws[:size]
