"""Exact algebra and spectral checks for the standard Podleś quantum sphere."""

__version__ = "0.1.0"
