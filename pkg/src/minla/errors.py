"""Exception types shared across the package."""


class MinlaError(Exception):
    """Base class for all library errors."""


class InstanceMismatchError(MinlaError):
    """Two values that must live on the same node set do not."""


class TraceFormatError(MinlaError):
    """Malformed trace text.

    Carries the 1-based line number of the first offending line.
    """

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class TraceValidationError(MinlaError):
    """A structurally valid trace violates the reveal-model invariants.

    ``event_index`` is the 0-based index of the first offending event, or
    ``None`` when the problem is not tied to a single event.
    """

    def __init__(self, message: str, event_index=None):
        if event_index is not None:
            message = f"event {event_index}: {message}"
        super().__init__(message)
        self.event_index = event_index


class CapacityError(MinlaError):
    """An exact search was asked to handle more items than its hard cap."""


class ProtocolError(MinlaError):
    """An adaptive adversary observed a state it cannot respond to."""


class ConfigError(MinlaError):
    """Invalid experiment or CLI configuration."""
