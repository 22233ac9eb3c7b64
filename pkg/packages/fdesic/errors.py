"""
Exception types raised by the fdesic package.
"""

from typing import Optional


class FdeSicError(Exception):
    """Base class for every error raised by fdesic."""


class InvalidArgumentError(FdeSicError, ValueError):
    """An argument violates an operation's precondition."""


class NumericDegeneracyError(FdeSicError, ArithmeticError):
    """A model evaluation hit a singular or non-finite intermediate."""

    def __init__(self, message: str, freq_hz: Optional[float] = None):
        super().__init__(message)
        self.freq_hz = freq_hz


class BandTooNarrowError(FdeSicError, ValueError):
    """The grid does not contain both -3 dB crossings around a peak."""


class ChannelParseError(FdeSicError, ValueError):
    """A channel CSV file is malformed."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IqFormatError(FdeSicError, ValueError):
    """An IQ stream file has a bad header or a truncated payload."""
