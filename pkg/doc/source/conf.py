# -*- coding: utf-8 -*-
#
# quaperture documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys
import os

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here.
sys.path.insert(0, os.path.abspath('../..'))

import quaperture

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx_autodoc_typehints',
    'sphinx.ext.intersphinx',
    'sphinx.ext.todo',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

autodoc_default_flags = ['members', 'undoc-members', 'show-inheritance']
autoclass_content = 'both'
napoleon_include_init_with_doc = True

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'quaperture'
author = 'quaperture developers'
version = quaperture.__version__
release = quaperture.__version__

language = None
exclude_patterns = ['_build']
pygments_style = 'sphinx'
todo_include_todos = True

# -- Options for HTML output ----------------------------------------------

html_theme = 'classic'
htmlhelp_basename = 'quaperture-doc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {
}

latex_documents = [
  (master_doc, 'quaperture.tex', 'quaperture Documentation',
   author, 'manual'),
]

man_pages = [
    (master_doc, 'quaperture', 'quaperture Documentation',
     [author], 1)
]

intersphinx_mapping = {'https://docs.python.org/': None,
                       'https://numpy.org/doc/stable/': None,
                       'https://docs.scipy.org/doc/scipy/': None}


def skip(app, what, name, obj, skip, options):
    if name == "__init__" and hasattr(obj, '__doc__') and isinstance(obj.__doc__, str) and len(obj.__doc__):
        return True
    return skip


def setup(app):
    app.connect("autodoc-skip-member", skip)
