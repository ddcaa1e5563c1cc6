"""Exact-arithmetic pseudosegment representations and arrangement counting tools."""

__version__ = "0.1.0"
