"""Turán-type combinatorics for the 3-regular family H_{k,l}."""

__version__ = "0.1.0"
