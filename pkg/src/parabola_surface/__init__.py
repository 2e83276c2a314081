"""Exact and high-precision verification toolkit for the parabola surfaces S_c."""

__version__ = "0.1.0"
