"""Exception types shared across the package."""

from __future__ import annotations


class BandKnotError(Exception):
    """Base class for all errors raised by bandknot."""


class CapExceeded(BandKnotError):
    """A brute-force scan would exceed the configured enumeration cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: needs {size} steps, enumeration cap is {cap}")


class InputError(BandKnotError, ValueError):
    """Malformed user input. Carries an optional (start, end) span into ``source``."""

    def __init__(self, message: str, source: str | None = None,
                 span: tuple[int, int] | None = None):
        self.message = message
        self.source = source
        self.span = span
        super().__init__(self.render())

    def render(self) -> str:
        if self.source is None or self.span is None:
            return self.message
        start, end = self.span
        caret = " " * start + "^" * max(1, end - start)
        return f"{self.message} at {start}..{end}\n  {self.source}\n  {caret}"


class InconsistentBounds(BandKnotError):
    """Supplied invariant data produced a lower bound above an upper bound."""


class SplitFailure(BandKnotError):
    """An isotropic form had no small nonsingular metabolic summand."""
