#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
Worker pool for independent work items (windows, shuffles, processes).

Results always come back in item order, so a parallel map returns exactly
what the serial loop would.
"""

import logging
import multiprocessing
import os


log = logging.getLogger(__name__)

THREADS_ENV = 'KCT_THREADS'


def worker_count(requested=None):
    """
    Number of worker processes: ``requested`` if given, else KCT_THREADS,
    else 1. Never more than the CPU count.
    """
    if requested is None:
        raw = os.environ.get(THREADS_ENV, '1')
        try:
            requested = int(raw)
        except ValueError:
            log.warning('ignoring non-integer %s=%r', THREADS_ENV, raw)
            requested = 1
    return max(1, min(int(requested), multiprocessing.cpu_count()))


def parallel_map(func, items, workers=None):
    """
    ``[func(item) for item in items]``, spread over a process pool when more
    than one worker is allowed. ``func`` must be picklable (module level).
    """
    items = list(items)
    workers = min(worker_count(workers), len(items))
    if workers <= 1:
        return [func(item) for item in items]
    log.debug('mapping %d items over %d workers', len(items), workers)
    pool = multiprocessing.Pool(processes=workers)
    try:
        return pool.map(func, items)
    finally:
        pool.close()
        pool.join()
