"""Exception types raised across the package."""


class CompletionError(Exception):
    """Base class for all package errors."""


class ParseError(CompletionError, ValueError):
    """Malformed graph, matrix or schedule text.

    ``line`` and ``column`` are 1-based and may be ``None`` when the error
    is not tied to a position.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            where += ": "
        super().__init__(where + message)


class InvalidGraphError(CompletionError, ValueError):
    """Self-loops, out-of-range endpoints, duplicate edges."""


class CliqueCapExceeded(CompletionError, RuntimeError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"maximal clique count exceeds the configured cap of {cap}")


class NotHermitianError(CompletionError, ValueError):
    """Input matrix departs from Hermitian symmetry beyond round-off."""


class NotPartialPositiveError(CompletionError, ValueError):
    pass


class ScheduleError(CompletionError, ValueError):
    """Schedule inconsistent with the graph it is applied to."""


class WitnessError(CompletionError, ValueError):
    """Gadget placements for which the lower-bound argument does not apply."""
