# Configuration file for the Sphinx documentation builder.

project = "qbattery"
copyright = "2024, qbattery developers"
author = "qbattery developers"

extensions = [
    "sphinx_rtd_theme",
]
exclude_patterns = []

html_theme = "sphinx_rtd_theme"
html_context = {
    "display_github": False,
    "conf_py_path": "/docs/source/",
}
