"""Exception types raised by the geometry routines."""


class GeometryError(ValueError):
    pass


class CoincidentPoints(GeometryError):
    pass


class NotHyperbolic(GeometryError):
    pass


class NotHyperbolicPair(GeometryError):
    pass


class ZeroK(GeometryError):
    pass


class OutOfDomain(GeometryError):
    pass


class NegativeDiscriminant(GeometryError):
    """Radicand of the circle-intersection formula went negative past roundoff."""


class MixedSides(GeometryError):
    pass


class DegenerateFactor(GeometryError):
    pass


class BadIndex(GeometryError, IndexError):
    pass


class PreconditionFailed(GeometryError):
    pass


class SearchFailed(GeometryError):
    pass
