class GedTrackError(Exception):
    """Base class for all errors raised by gedtrack."""


class FormatError(GedTrackError, ValueError):
    """Malformed input data (bad rows, self-loops, negative weights)."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParameterError(GedTrackError, ValueError):
    """An argument is outside the range an operation accepts."""


class ConfigError(GedTrackError):
    """Pipeline configuration is inconsistent or incomplete."""
