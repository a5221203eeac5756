"""Intrinsic metrics, conformal radii and their extremal constants in planar domains.

Modules
-------
specfun
    Elliptic integrals, Jacobi functions, gamma family, edge integral.
geometry
    Convex polygons, boundary distance, the triangular ratio metric.
hypmetric
    Hyperbolic metric in the disk, half-plane and rectangles.
extremal
    Conformal radius, ``2d/r`` and the named extremal constants.
"""

from .errors import ConvergenceError, DomainError, PrecisionError, SingularityError
from .geometry import ConvexPolygon, PlanarGraph, Rectangle

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "ConvexPolygon",
    "DomainError",
    "PlanarGraph",
    "PrecisionError",
    "Rectangle",
    "SingularityError",
]
