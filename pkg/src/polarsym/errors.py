"""Exception hierarchy shared by the library and the workbench."""

from __future__ import annotations

from typing import Optional, Sequence


class PolarSymError(Exception):
    """Base class for every error raised by polarsym."""


class CapExceededError(PolarSymError):
    """
    A computation would exceed one of the configured size caps.

    Attributes
    ----------
    what : str
        The quantity that is too large (``"row space"``, ``"domain"``, ...).
    size : int
        The size that was requested.
    cap : int
        The configured limit.
    hint : str, optional
        Guidance on how to stay within the cap.
    """

    def __init__(self, what: str, size: int, cap: int, hint: Optional[str] = None):
        self.what = what
        self.size = size
        self.cap = cap
        self.hint = hint
        message = f"{what} size {size} exceeds the configured cap {cap}"
        if hint:
            message += f" ({hint})"
        super().__init__(message)


class DimensionError(PolarSymError, ValueError):
    """Length, shape or index mismatch."""


class ChannelError(PolarSymError, ValueError):
    """Malformed channel parameters or an unsuitable channel for an operation."""


class ChannelValidationError(ChannelError):
    """A channel failed validation; ``violations`` lists every problem found."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("invalid channel: " + "; ".join(self.violations))


class ReductionError(PolarSymError, ValueError):
    """An invalid reduction parameter, or a closed form used outside its domain."""
