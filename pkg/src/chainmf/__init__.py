"""Exceptional collections of graded matrix factorizations for chain polynomials."""

__version__ = "0.1.0"
