"""Exception hierarchy shared by the library and the CLI."""


class CoverwidthError(Exception):
    """Base class for every error raised by this package."""


class SignatureMismatch(CoverwidthError, ValueError):
    pass


class NotTotal(CoverwidthError, ValueError):
    """A mapping that should be total misses some left element."""


class OutsideUniverse(CoverwidthError, ValueError):
    """A mapping mentions an element outside the relevant universe."""


class InvalidStructure(CoverwidthError, ValueError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class InvalidDecomposition(CoverwidthError, ValueError):
    """The decomposition is not a tree or fails the decomposition conditions."""


class InvalidScheme(CoverwidthError, ValueError):
    pass


class InvalidStrategy(CoverwidthError, ValueError):
    pass


class SizeBoundExceeded(CoverwidthError):
    """An exhaustive routine refused an input above its configured bound."""


class LiftDefect(CoverwidthError, RuntimeError):
    """An invariant that the lifting construction relies on was breached."""
