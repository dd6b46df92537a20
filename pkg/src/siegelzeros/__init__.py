"""Exact and numerical tools around real zeros of automorphic L-series."""

__version__ = "0.1.0"
