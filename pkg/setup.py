#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#


"""
setup.py for koopconj
"""

import os

from setuptools import setup, find_packages

from koopconj import __version__


this_dir = os.path.abspath(os.path.dirname(__file__))


NAME = 'koopman-conjugacy'
VERSION = __version__
PACKAGES = find_packages(exclude=['tests', 'tests.*'])
DESCRIPTION = 'Koopman-Conjugacy - Dynamics Equivalence Toolkit'
LICENSE = 'GNU LGPLv3'
LONG_DESCRIPTION = open(os.path.join(this_dir, 'README.rst')).read()
REQUIREMENTS = list(filter(None, open(os.path.join(this_dir, 'requirements.txt')).read().splitlines()))
EXTRAS = {
    'database': ['SQLAlchemy>=1.4'],
    'test': ['pytest'],
}
AUTHOR = 'Koopman-Conjugacy contributors'
KEYWORDS = ('koopman', 'dmd', 'conjugacy', 'dynamical systems', 'wasserstein', 'optimization')
CLASSIFIERS = [
    'Development Status :: 4 - Beta',
    'License :: OSI Approved :: GNU Library or Lesser General Public License (LGPL)',
    'Operating System :: OS Independent',
    'Programming Language :: Python',
    'Programming Language :: Python :: 3',
    'Programming Language :: Python :: 3.8',
    'Topic :: Scientific/Engineering :: Mathematics',
]
CONSOLE_SCRIPTS = [
    'kct = koopconj.utilities.cli:main',
    'kct-run = koopconj.utilities.run:main',
    'kct-newproject = koopconj.utilities.newproject:main',
    'kct-check = koopconj.dependency_checker:main',
]


params = dict(
    name=NAME,
    version=VERSION,
    packages=PACKAGES,
    install_requires=REQUIREMENTS,
    extras_require=EXTRAS,
    python_requires='>=3.8',

    # metadata for upload to PyPI
    author=AUTHOR,
    description=DESCRIPTION,
    long_description=LONG_DESCRIPTION,
    license=LICENSE,
    keywords=KEYWORDS,
    classifiers=CLASSIFIERS,
    entry_points={'console_scripts': CONSOLE_SCRIPTS}
)

setup(**params)
