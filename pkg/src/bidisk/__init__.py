"""Geometry of the bidisk H^2 x H^2: square hyperbolae, equidistant
hypersurfaces and Dirichlet domains of cyclic groups."""

from .errors import GeometryError
from .hplane import Geodesic, HPoint, I, IdealPoint, Mobius, dist
from .product import BidiskIsometry, BidiskPoint, Flat, rho
from .sqhyperbola import Branch, SquareHyperbola

__all__ = ["GeometryError", "Geodesic", "HPoint", "I", "IdealPoint", "Mobius", "dist",
           "BidiskIsometry", "BidiskPoint", "Flat", "rho", "Branch", "SquareHyperbola"]
