"""Exception types raised by aerocell."""


class AerocellError(Exception):
    """Base class for all package errors."""


class DomainError(AerocellError, ValueError):
    """A physical model was evaluated outside its valid input domain."""


class ConfigError(AerocellError, ValueError):
    """Invalid or inconsistent configuration."""


class WeatherError(AerocellError, ValueError):
    """Malformed or out-of-range weather input.

    ``row`` is the 1-based data row (header excluded) when the error comes
    from a file, ``field`` the offending column.
    """

    def __init__(self, message, row=None, field=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row
        self.field = field
