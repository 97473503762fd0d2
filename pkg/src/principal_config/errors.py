"""Exception types raised by the curvature, umbilic and foliation routines."""


class GeometryError(Exception):
    """Base class for all errors raised by this package."""


class SingularPoint(GeometryError):
    """The surface is not regular at the requested point."""


class OutOfDomain(GeometryError):
    """The chart point lies outside the domain of the patch."""


class UmbilicReference(GeometryError):
    """Principal directions were requested at an umbilic point."""


class JetUnstable(GeometryError):
    """The rotation making the u^2 v coefficient vanish is ill-conditioned."""


class DegenerateFlat(GeometryError):
    """All cubic coefficients of the jet vanish."""


class RootConditioning(GeometryError):
    """The slope cubic of the lifted field has a (near) multiple root."""


class SeedAtUmbilic(GeometryError):
    """A principal line was seeded at an umbilic point."""


class ChartTransitionFailure(GeometryError):
    """Integration could not be continued onto the surface."""


class SectionDegenerate(GeometryError):
    """A transversal section could not be erected on a cycle."""


class DegenerateLocation(GeometryError):
    """Confocal coordinates requested on a symmetry plane."""


class Unsupported(GeometryError):
    """The surface type is recognised but not handled."""


class NoContent(GeometryError):
    """A report holds nothing that can be drawn."""
