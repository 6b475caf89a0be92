"""Exception types shared across the package.

The command line layer maps these onto exit codes, so library code should
raise the most specific type that applies instead of bare ValueError.
"""


class AsrelError(Exception):
    """Base class for all errors raised by this package."""


class SelfLoopError(AsrelError):
    """A vertex pair named the same AS twice."""


class UnknownEdgeError(AsrelError):
    """A vote or lookup referenced an edge that is not in the graph."""


class ParseError(AsrelError):
    """An input file could not be parsed.

    Carries the offending source name and 1-based line number when known.
    """

    def __init__(self, message: str, source: str = "", line: int = 0):
        detail = message
        if source:
            detail = f"{source}:{line}: {message}" if line else f"{source}: {message}"
        super().__init__(detail)
        self.source = source
        self.line = line


class ParameterError(AsrelError):
    """A function argument was outside its documented range."""


class ConfigurationError(AsrelError):
    """A configuration combination is invalid or incomplete."""


class EmptyCoreError(AsrelError):
    """A core construction produced no usable vertices."""


class CorruptionInfeasibleError(AsrelError):
    """No replacement vertex satisfies the connectivity requirement."""
