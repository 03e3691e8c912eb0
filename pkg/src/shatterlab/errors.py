"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI:
  VerificationError -> 1, InputError -> 2, ResourceCapError -> 3.
"""


class ShatterLabError(Exception):
    pass


class InputError(ShatterLabError):
    """Malformed or out-of-contract input."""


class ResourceCapError(ShatterLabError):
    """An enumeration cap would be exceeded; pass a larger cap to override."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap


class VerificationError(ShatterLabError):
    """A checked bound or validator failed."""
