"""Exact unit-ball volumes, their asymptotic series, and certified bound checks."""

__version__ = "0.1.0"
