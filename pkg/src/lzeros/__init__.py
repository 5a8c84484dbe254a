"""Zeros of Dirichlet L-functions, Landau-Gonek sums and distinct-zero checks."""

__version__ = "0.1.0"
