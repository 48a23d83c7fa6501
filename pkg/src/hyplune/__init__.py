"""Reverse isoperimetric bounds and extremal shapes for curvature-constrained
convex curves in the hyperbolic plane."""

__version__ = "0.1.0"
