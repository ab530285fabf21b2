"""Exception types shared across the package."""


class ColstreamError(ValueError):
    """Base class for all configuration and shape errors."""


class InvalidShapeError(ColstreamError):
    pass


class UnsupportedKernelError(ColstreamError):
    pass


class UnsupportedStrideError(ColstreamError):
    pass


class InvalidArgumentError(ColstreamError):
    pass


class InvalidRecordError(ColstreamError):
    pass


class EngineInvariantError(RuntimeError):
    """Raised when the engine reaches a state the schedule should make impossible."""
