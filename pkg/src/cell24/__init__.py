"""Hyperbolic 4-manifolds glued from the ideal regular hyperbolic 24-cell."""

__version__ = "0.1.0"
