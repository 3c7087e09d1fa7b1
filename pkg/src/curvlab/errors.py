"""Exception types raised by curvlab."""


class CurvlabError(ValueError):
    """Base class for invalid input to curvlab routines."""


class InvalidDimensionError(CurvlabError):
    pass


class ShapeError(CurvlabError):
    pass


class MalformedTensorError(CurvlabError):
    pass


class InvalidRotationError(CurvlabError):
    pass


class PreconditionError(CurvlabError):
    """An operation was called outside the domain where its result is defined."""
