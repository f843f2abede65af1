"""Backlund transformations of Peterson deformations of quadrics, realized numerically."""

__version__ = "0.1.0"
