"""Exception hierarchy shared by the library and the CLI.

Every domain failure derives from :class:`FqSimplexError` so the command line
front end can map it to exit code 1 with a structured JSON payload.
"""


class FqSimplexError(Exception):
    """Base class for structured domain errors."""

    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self)}


class ResidualTooLarge(FqSimplexError):
    """A floating point spectral count drifted too far from an integer."""


class InstanceTooLarge(FqSimplexError):
    """Projected work exceeds the configured budget."""


class NotCongruent(FqSimplexError):
    pass


class DegenerateSpan(FqSimplexError):
    """The Gram matrix of the source span is singular mod q."""


class NotGeneralPosition(FqSimplexError):
    pass


class PointSetFormatError(FqSimplexError):
    pass
