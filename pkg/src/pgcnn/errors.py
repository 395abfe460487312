"""Exception types shared across the package."""


class BudgetExceeded(ValueError):
    """A requested object would exceed a configured size budget."""


class GroupParseError(ValueError):
    """Malformed group spec string.

    ``position`` is the 0-based character offset where parsing failed.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RingMismatch(ValueError):
    """Operands live over different groups or rings."""
