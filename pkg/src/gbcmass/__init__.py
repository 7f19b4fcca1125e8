"""Numerical engine for the Gauss-Bonnet-Chern mass of Euclidean graphs."""

__version__ = "0.1.0"
