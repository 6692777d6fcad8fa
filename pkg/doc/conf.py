# Configuration file for the Sphinx documentation builder of swgstokes.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

# -- Project information -----------------------------------------------------

project = 'swgstokes'
copyright = '2026, swgstokes developers'
author = 'swgstokes developers'
release = '0.1.0'

try:
    # project name, version and author live in pyproject.toml
    from toml import load
    with open('../pyproject.toml') as f:
        pyproject = load(f)['project']
    project = pyproject['name']
    release = pyproject['version']
    author = pyproject['authors'][0]['name']
except Exception:
    pass

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'myst_parser',
]

autodoc_member_order = 'bysource'
autodoc_typehints = 'description'

myst_all_links_external = True

templates_path = ['_templates']
source_suffix = '.rst'
exclude_patterns = ['doc_build', 'Thumbs.db', '.DS_Store']

# -- Options for HTML output -------------------------------------------------

html_theme = 'agogo'
html_theme_options = {'rightsidebar': False}
