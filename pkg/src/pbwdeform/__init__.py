"""Exact conversion between weak PBW-deformations and graded deformations."""

__version__ = "0.1.0"
