#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#


""" script to verify all koopman-conjugacy dependencies are satisfied """


import importlib
import sys


MIN_PYTHON = (3, 8)

# (import name, display name, required)
DEPENDENCIES = (
    ('numpy', 'NumPy', True),
    ('scipy', 'SciPy', True),
    ('sqlalchemy', 'SQLAlchemy', False),
    ('pytest', 'pytest', False),
)


def check_dependencies(stream=None):
    """
    Print one line per dependency; returns the names of missing required ones.
    """
    stream = stream or sys.stdout
    missing = []
    if sys.version_info < MIN_PYTHON:
        stream.write('incompatible python version detected: %s.  Minimum version supported is %d.%d\n' % (
            repr(sys.version_info), MIN_PYTHON[0], MIN_PYTHON[1]))
        missing.append('python')
    else:
        stream.write('compatible python version detected: %s\n' % repr(sys.version_info))

    for module_name, display_name, required in DEPENDENCIES:
        try:
            module = importlib.import_module(module_name)
            stream.write('imported %s %s successfully\n' % (
                display_name, getattr(module, '__version__', '')))
        except ImportError:
            stream.write('can not import %s%s\n' % (display_name, '' if required else ' (optional)'))
            if required:
                missing.append(display_name)
    return missing


def main():
    sys.exit(1 if check_dependencies() else 0)


if __name__ == '__main__':
    main()
