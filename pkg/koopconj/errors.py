#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
Exception hierarchy.

Every error raised on purpose by the library derives from KoopConjError and
carries the exit code the command line tools terminate with:

  - DataError (3): malformed, mis-shaped or inconsistent input data.
  - NumericalError (4): data that is well formed but numerically degenerate.

Usage errors (exit code 2) are raised by the option parsers themselves.
"""

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


class KoopConjError(Exception):
    exit_code = 1


class DataError(KoopConjError):
    exit_code = EXIT_DATA


class NumericalError(KoopConjError):
    exit_code = EXIT_NUMERICAL


class EnsembleError(DataError):
    """Trajectory ensemble violates its shape or finiteness invariants."""


class EmbeddingError(DataError):
    """Trajectory too short for the requested number of delays."""


class EmptyWindowError(DataError):
    """No window of the requested length fits in the trajectories."""


class PermutationError(DataError):
    pass


class CardinalityError(DataError):
    """Eigenvalue sets have sizes the requested comparison can not handle."""


class FormatError(DataError):
    """Trajectory or matrix file does not match its declared layout."""


class SchemaError(DataError):
    """JSON document violates its schema; message starts with the field path."""


class ManifestError(DataError):
    pass


class BracketError(DataError):
    """Bisection bracket does not satisfy f(a) < 0 < f(b)."""


class DomainError(DataError):
    """Iterate outside the domain its optimizer is defined on."""


class InvalidObjectiveError(DataError):
    """
    Raised when a custom objective script does not conform to the interface.

    OBJECTIVE SCRIPT INTERFACE:
      - value(x) function exists and is callable.
      - gradient(x) function exists and is callable.
    """


class ConfigError(DataError):
    pass


class DegenerateDataError(NumericalError):
    pass


class RankError(NumericalError):
    """Requested rank exceeds the attainable rank of the data."""

    def __init__(self, message, attainable_rank=None):
        NumericalError.__init__(self, message)
        self.attainable_rank = attainable_rank


class RankCollapseError(NumericalError):
    pass


class StepSingularityError(NumericalError):
    pass


class NonFiniteError(NumericalError):
    pass
