#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#

__version__ = '0.3.0'
