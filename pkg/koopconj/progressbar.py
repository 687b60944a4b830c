#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

import sys


class ProgressBar(object):
    """Console bar over a known number of work items (processes, comparisons)."""

    def __init__(self, total, stream=None):
        self.total = max(int(total), 1)
        self.done = 0
        self.prog_bar = '[]'
        self.fill_char = '='
        self.width = 40
        self.stream = stream or sys.stdout
        self.__update_amount(0)

    def __update_amount(self, new_amount):
        percent_done = int(round(new_amount))
        if percent_done > 100:
            percent_done = 100
        all_full = self.width - 2
        num_hashes = int(round((percent_done / 100.0) * all_full))
        self.prog_bar = '[' + self.fill_char * num_hashes + ' ' * (all_full - num_hashes) + ']'
        pct_place = (len(self.prog_bar) // 2) - len(str(percent_done))
        pct_string = '%i%%' % percent_done
        self.prog_bar = self.prog_bar[0:pct_place] + \
            (pct_string + self.prog_bar[pct_place + len(pct_string):])

    def update_count(self, done, label=''):
        self.done = min(int(done), self.total)
        self.__update_amount((self.done / float(self.total)) * 100.0)
        self.prog_bar += '  %d/%d' % (self.done, self.total)
        if label:
            self.prog_bar += '  %s' % label

    def advance(self, label=''):
        """Count one more finished item and redraw in place."""
        self.update_count(self.done + 1, label)
        self.stream.write('\r%s\x1b[K' % self)
        if self.done == self.total:
            self.stream.write('\n')
        self.stream.flush()

    def __str__(self):
        return str(self.prog_bar)
