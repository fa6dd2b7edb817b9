"""
CosineLaw UI Package

This package contains the command-line interface and its configuration loading.
"""

__version__ = "0.1.0"
