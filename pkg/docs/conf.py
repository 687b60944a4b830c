# -*- coding: utf-8 -*-
#
# Koopman-Conjugacy documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

import koopconj

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.viewcode']

source_suffix = '.rst'
master_doc = 'index'

project = u'Koopman-Conjugacy - Dynamics Equivalence Toolkit'
copyright = u'2026, Koopman-Conjugacy contributors'

version = '.'.join(koopconj.__version__.split('.')[:2])
release = koopconj.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'nature'
html_title = 'Koopman-Conjugacy v%s Docs' % release
html_last_updated_fmt = '%b %d, %Y'
html_use_index = False
html_split_index = False
html_show_sourcelink = False
html_show_sphinx = False
html_show_copyright = True
html_file_suffix = ".html"
htmlhelp_basename = 'Koopconj-docs'
