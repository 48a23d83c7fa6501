"""Exception types shared across the package."""


class HypluneError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HypluneError):
    """A numeric argument is outside the mathematically valid range."""


class InvalidPointError(HypluneError):
    """Coordinates do not describe a point on the unit hyperboloid."""


class DegenerateCycleError(HypluneError):
    """Plane/offset data describes an empty or single-point cycle."""


class IdenticalCycleError(HypluneError):
    """Two cycles handed to an intersection routine coincide."""


class AdmissibilityError(HypluneError):
    """A support profile violates the convexity/admissibility constraints."""


class RegionError(HypluneError):
    """A half-plane intersection is unusable as a convex body."""


class EmptyRegionError(RegionError):
    """The half-planes have empty (or measure-zero) intersection."""


class UnboundedRegionError(RegionError):
    """The half-plane intersection is not compact."""


class IntegrationError(HypluneError):
    """State integration left the admissible region (curve blow-up)."""


class GenerationError(HypluneError):
    """Random shape generation exhausted its retry budget."""
