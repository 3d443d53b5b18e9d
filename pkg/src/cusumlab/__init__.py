"""Verification toolkit for positivity of multi-index cusums of standardized Muirhead ratios."""

__version__ = "0.1.0"
