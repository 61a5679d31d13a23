"""Corpus cleansing for web argument collections.

Detects argumentatively irrelevant sentences via semi-supervised lexical
pattern bootstrapping, supports human seed triage and evaluation annotation
through a small web workbench, and emits a cleaned corpus plus diagnostics.
"""

__version__ = "0.1.0"
