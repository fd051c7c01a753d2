"""Exact engine for 2-periodic complexes over polynomial rings and their localized K-classes."""

__version__ = "0.1.0"
