"""Exact computations on varieties of commuting (strictly) upper triangular matrix pairs."""

__version__ = "0.1.0"
