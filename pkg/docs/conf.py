# -*- coding: utf-8 -*-
#
# subradius documentation build configuration file.
#
# Only the settings that differ from the sphinx-quickstart defaults are kept.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

import sphinx_rtd_theme

# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinxcontrib.napoleon']

# Google-style docstrings throughout
napoleon_google_docstring = True
napoleon_numpy_docstring = False

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'subradius'
copyright = '2026, the subradius developers'
author = 'the subradius developers'

version = '0.1'
release = '0.1'

language = None
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False

autodoc_member_order = 'bysource'

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
html_static_path = ['_static']
htmlhelp_basename = 'subradiusdoc'

# -- Options for LaTeX and manual page output -----------------------------

latex_documents = [
    (master_doc, 'subradius.tex', 'subradius Documentation',
     author, 'manual'),
]

man_pages = [
    (master_doc, 'subradius', 'subradius Documentation',
     [author], 1)
]
