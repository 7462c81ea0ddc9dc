# Configuration file for the Sphinx documentation builder.
import veech_candidates
import sphinx_rtd_theme

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "numpydoc",
]

autosummary_generate = True
numpydoc_show_class_members = False

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "veech-candidates"
copyright = "2026, veech-candidates developers"
author = "veech-candidates developers"

version = veech_candidates.__version__
release = veech_candidates.__version__

exclude_patterns = []
pygments_style = "sphinx"

html_theme = "sphinx_rtd_theme"
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
htmlhelp_basename = "veech-candidates"

man_pages = [(master_doc, "veech-candidates", "veech-candidates Documentation", [author], 1)]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3/", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "sympy": ("https://docs.sympy.org/latest/", None),
}
