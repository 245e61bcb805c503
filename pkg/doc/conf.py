# -*- coding: utf-8 -*-
#
# localview-capacity documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys

import sphinx_rtd_theme

sys.path.append('../')
import localview

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.todo',
    'numpydoc',
    'sphinx.ext.ifconfig',
    'sphinx.ext.viewcode',
    'sphinx.ext.imgmath',
]

numpydoc_show_class_members = False

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'localview-capacity'
version = '.'.join(localview.__version__.split('.')[:2])
release = localview.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
html_static_path = ['_static']
html_domain_indices = False
html_show_sourcelink = False
html_show_sphinx = False
html_show_copyright = False
htmlhelp_basename = 'localviewdoc'

texinfo_domain_indices = False

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'networkx': ('https://networkx.org/documentation/stable/', None),
    'pandas': ('https://pandas.pydata.org/pandas-docs/stable/', None),
}
