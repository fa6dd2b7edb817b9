"""Spherical cosine laws as discrete integrable systems."""

__version__ = "0.1.0"
