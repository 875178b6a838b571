"""Numerical geometry of spherical Milnor spaces over matrix Lie groups."""

__version__ = "0.1.0"
