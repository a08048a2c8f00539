class IpsError(ValueError):
    """Base class for every error raised by the ips package."""


class ExactArithmeticError(IpsError):
    pass


class GeometryError(IpsError):
    pass


class RealizabilityError(IpsError):
    pass


class ConstructionError(IpsError):
    pass


class BoundsError(IpsError):
    pass


class PackingError(IpsError):
    pass


class SearchGuardError(IpsError):
    pass


class DocumentError(IpsError):
    """Malformed or invalid JSON document."""
