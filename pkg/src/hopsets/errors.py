class InputError(ValueError):
    """Malformed or out-of-contract input."""


class ParseError(InputError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class PreconditionError(InputError):
    """An operation was called on input violating its precondition."""


class OracleCapError(RuntimeError):
    """Brute-force oracle refused an input above its size cap."""
