"""Extreme Partial Least Squares and its shrinkage variants."""

__version__ = "0.3.0"
