#!/usr/bin/env python
#
#  Copyright (c) 2026 Koopman-Conjugacy contributors
#  License: GNU LGPLv3
#
#  This file is part of Koopman-Conjugacy | Dynamics Equivalence Toolkit
#


import os
import sys


CONFIG_NAME = 'config.cfg'
SCRIPT_NAME = 'sum_squares.py'
SCRIPTS_DIR = 'objectives'


CONFIG_CONTENT = """
[global]
seed = 0
delays = 4
rank = 10
svd_rel_tol = 1e-12
residual_tol = None
scale_columns = on
shuffles = 100
components = None
semi_tol = 1e-3
results_database = None
progress_bar = on
console_logging = off

[process-omd]
optimizer = omd
objective = tan
eta = 0.01
steps = 100
grid = paper

[process-ogd]
optimizer = ogd
objective = tan
eta = 0.01
steps = 100
grid = paper

[process-bm]
optimizer = bm
objective = tan
steps = 100
grid = paper

# a custom objective, loaded from %s/%s:
#
# [process-omd-squares]
# optimizer = omd
# objective = custom
# objective_script = %s/%s
# eta = 0.01
# steps = 100

[compare]
pairs = omd:ogd, omd:bm, ogd:bm

""" % (SCRIPTS_DIR, SCRIPT_NAME, SCRIPTS_DIR, SCRIPT_NAME)


SCRIPT_CONTENT = """
import numpy as np


def value(x):
    return float(np.sum(x ** 2))


def gradient(x):
    return 2.0 * x


if __name__ == '__main__':
    x = np.array([0.5, 0.25])
    print(value(x), gradient(x))
"""


def create_project(
        project_name,
        config_name=CONFIG_NAME,
        script_name=SCRIPT_NAME,
        scripts_dir=SCRIPTS_DIR,
        config_content=CONFIG_CONTENT,
        script_content=SCRIPT_CONTENT,
    ):
    if os.path.exists(project_name):
        sys.stderr.write('\nERROR: project already exists: %s\n\n' % project_name)
        sys.exit(1)
    try:
        os.makedirs(project_name)
        os.makedirs(os.path.join(project_name, scripts_dir))
    except OSError:
        sys.stderr.write('\nERROR: can not create directory for %r\n\n' % project_name)
        sys.exit(1)
    with open(os.path.join(project_name, config_name), 'w') as f:
        f.write(config_content)
    with open(os.path.join(project_name, scripts_dir, script_name), 'w') as f:
        f.write(script_content)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        project_name = argv[0]
    except IndexError:
        sys.stderr.write('\nERROR: no project specified\n\n')
        sys.stderr.write('Usage: kct-newproject <project name>\n\n')
        sys.exit(2)

    create_project(project_name)


if __name__ == '__main__':
    main()
