"""Truncated workbench for extension algebras, higher derivations and radicals."""

__version__ = "0.1.0"
