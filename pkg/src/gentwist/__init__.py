"""Generalized Dehn twists on surfaces with exact rational arithmetic."""

__version__ = "0.1.0"
