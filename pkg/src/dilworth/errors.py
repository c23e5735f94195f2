"""Exception types shared by the library and the CLI."""


class InputError(ValueError):
    """Malformed or out-of-range input. ``field`` names the offending item."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class DimensionMismatch(InputError):
    pass


class CapExceeded(InputError):
    def __init__(self, size, cap, field="subset"):
        super().__init__(
            f"{field} has {size} elements; enumeration cap is {cap}", field=field
        )
        self.size = size
        self.cap = cap


class VerificationFailure(RuntimeError):
    """A computed value disagreed with the value it was checked against."""

    def __init__(self, check, message):
        super().__init__(f"{check}: {message}")
        self.check = check


class TransversalityError(RuntimeError):
    def __init__(self, element, expected, got):
        super().__init__(
            f"member {element!r} meets the section in dimension {got}, expected {expected}"
        )
        self.element = element
        self.expected = expected
        self.got = got
