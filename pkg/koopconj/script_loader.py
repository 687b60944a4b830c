#!/usr/bin/env python
# -*- coding: UTF-8 -*-
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

"""
Load user objective scripts as python modules.

An objective script is a plain python file defining ``value(x)`` (scalar)
and ``gradient(x)`` (vector) for the optimizer simulations.
"""

import importlib.util
import inspect
import logging
import os.path

from koopconj.errors import InvalidObjectiveError


log = logging.getLogger(__name__)


class ObjectiveValidator(object):
    """
    Utility class to ensure that objective scripts conform to the interface.
    """

    @staticmethod
    def check_module_invalid(module):
        """
        Check if a script module is invalid and does not comply w/ conventions
        :returns: Problem as string, if any is found.
        :returns: None, if no problems are detected.
        """
        for name in ('value', 'gradient'):
            func = getattr(module, name, None)
            if func is None:
                return '{module}.{name}() function is missing'.format(
                    module=module.__name__, name=name)
            if not callable(func):
                return '{module}.{name}() is not callable'.format(
                    module=module.__name__, name=name)
        # -- EVERYTHING CHECKED: No problems detected.
        return None

    @classmethod
    def ensure_module_valid(cls, module):
        """
        Ensures that an objective module is valid.
        :raises: InvalidObjectiveError, if any convention is violated.
        """
        problem = cls.check_module_invalid(module)
        if problem:
            raise InvalidObjectiveError(problem)


class ScriptLoader(object):
    """Utility class to load scripts as python modules."""

    @staticmethod
    def load(path):
        """
        Load a script by using a path.
        :returns: Loaded script module.
        :raise: InvalidObjectiveError, when the script cannot be loaded.
        """
        if not os.path.exists(path):
            raise InvalidObjectiveError('objective script not found: %s' % path)
        module_name = inspect.getmodulename(path)
        spec = None
        if module_name is not None:
            spec = importlib.util.spec_from_file_location(module_name.replace('-', '_'),
                                                          os.path.abspath(path))
        if spec is None:
            raise InvalidObjectiveError('not a python script: %s' % path)
        module = importlib.util.module_from_spec(spec)
        try:
            spec.loader.exec_module(module)
        except Exception as e:
            raise InvalidObjectiveError('can not import %s: %s' % (path, e))
        log.debug('loaded objective script %s', path)
        return module

