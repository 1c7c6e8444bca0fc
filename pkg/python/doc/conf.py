import os
import sys

# -- package specific configuration --
project = "libbh"
version = "1.0"  # The short X.Y version.
release = "1.0a1"  # The full version, including alpha/beta/rc tags.
project_desc = "Bohnenblust-Hille constants, their asymptotics, and inequality checks"
logo_text = "libbh"

sys.path.insert(0, os.path.abspath(".."))

# -- General configuration ------------------------------------------------

autoclass_content = "both"
autosummary_generate = True
autosummary_imported_members = True
numpydoc_show_class_members = False
autodoc_typehints_format = "short"
python_use_unqualified_type_names = True
autodoc_inherit_docstrings = False
add_module_names = True

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
    "mpmath": ("https://mpmath.org/doc/current/", None),
}

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.coverage",
    "sphinx.ext.viewcode",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinxarg.ext",
    "sphinxcontrib.bibtex",
    "sphinx.ext.intersphinx",
    "numpydoc",
]

bibtex_bibfiles = ["refs.bib"]

# Napoleon settings
napoleon_google_docstring = False
napoleon_numpy_docstring = True
python_maximum_signature_line_length = 20

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

copyright = "2026, libbh developers"
author = "libbh developers"

language = "en"
exclude_patterns = ["_build"]
todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = "pydata_sphinx_theme"
html_theme_options = {
    "logo": {"text": logo_text},
    "pygment_light_style": "xcode",
    "pygment_dark_style": "lightbulb",
}

htmlhelp_basename = "libbhdoc"

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (
        master_doc,
        f"{project}.tex",
        f"{project} Documentation",
        author,
        "manual",
    ),
]

# -- Options for manual page output ---------------------------------------

man_pages = [(master_doc, f"{project}", f"{project} Documentation", [author], 1)]
