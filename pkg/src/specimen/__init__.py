"""Meaning assembly in second-order lambda calculus with many-sorted types."""

__version__ = "0.1.0"
