"""Ewens-measure mean values, Cesaro summability, and their numerical checks."""

__version__ = "0.1.0"
