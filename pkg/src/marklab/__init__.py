"""Marked groups, group rings, crossed products and SL_n(Z[1/p]) experiments."""

__version__ = "0.1.0"
