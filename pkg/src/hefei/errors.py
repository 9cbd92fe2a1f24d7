"""Exception hierarchy shared by all modules."""


class HefeiError(ValueError):
    """Base class for input errors raised by this package."""


class ShapeError(HefeiError):
    pass


class HermiticityError(HefeiError):
    pass


class TraceError(HefeiError):
    pass


class PositivityError(HefeiError):
    pass


class NormalizationError(HefeiError):
    pass


class DomainError(HefeiError):
    pass


class FrameMismatchError(HefeiError):
    """The state is not a chirality eigenstate of the requested frame."""
