"""Exception types shared across the package."""


class LoopCurrentsError(Exception):
    """Base class for all package errors."""


class GraphStructureError(LoopCurrentsError, ValueError):
    """Malformed graph input: bad endpoints, bad marks, bad segment spec."""


class GraphMismatchError(LoopCurrentsError, ValueError):
    """Two objects that must share a graph refer to different graphs."""


class CapExceededError(LoopCurrentsError, ValueError):
    """An enumeration would exceed the configured size cap.

    Raised instead of silently truncating; carries the offending size.
    """

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what} needs size {size}, above the cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class ParametrizationError(LoopCurrentsError, ValueError):
    """Exact mode requested at a parameter where it is not available."""


class PoleError(LoopCurrentsError, ZeroDivisionError):
    """A rational function was evaluated at a zero of its denominator."""
