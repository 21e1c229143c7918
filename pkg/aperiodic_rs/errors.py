"""
Exceptions raised by the aperiodic_rs package.
"""

from typing import Optional


class AperiodicError(Exception):
    """Base class for all package errors."""


class RangeError(AperiodicError, ValueError):
    """An integer argument lies outside its admissible range."""


class WordParseError(AperiodicError, ValueError):
    """A token string could not be parsed into a word."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"token {position}: {message}"
        super().__init__(message)


class SpecParseError(AperiodicError, ValueError):
    """A construction or rule string does not match the grammar."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"at position {position}: {message}"
        super().__init__(message)


class AlphabetMismatchError(AperiodicError):
    """Words, letters or rules built over different alphabets were combined."""


class FamilyError(AperiodicError):
    """An operation was applied to a state of the wrong construction family."""


class SignProgramError(AperiodicError):
    """An explicit sign program ran out of signs."""


class LevelCapError(AperiodicError):
    """A requested level exceeds the configured coefficient cap."""


class NotSelfExtendingError(AperiodicError):
    """The seed letter is not the first letter of its own image."""


class NonPrimitiveError(AperiodicError):
    """The rule is not primitive on the letters reachable from the seed."""


class ConvergenceError(AperiodicError):
    """An iterative root finder failed to converge."""

    def __init__(self, message: str, iterations: int):
        self.iterations = iterations
        super().__init__(f"{message} (after {iterations} iterations)")


class OutputError(AperiodicError):
    """An output file could not be written or an input file could not be read."""
