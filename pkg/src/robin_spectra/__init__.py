"""Discrete spectra of attractive Robin Laplacians on curved planar domains."""

__version__ = "0.1.0"
