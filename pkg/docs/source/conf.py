# Configuration file for the Sphinx documentation builder.

import os
import sys

module_path = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                           '../../')
sys.path.insert(0, module_path)

project = 'spatlogic'
copyright = '2026, The spatlogic developers'
author = 'The spatlogic developers'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'numpydoc',
]

numpydoc_show_class_members = False

source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = []
pygments_style = 'sphinx'

html_theme = 'sphinx_rtd_theme'
htmlhelp_basename = 'spatlogic'
