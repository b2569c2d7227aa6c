"""
Exception types shared across emforge
"""
from typing import Any, Optional


class EmforgeError(Exception):
    """Base class for all emforge errors"""


class InvalidInputError(EmforgeError, ValueError):
    """Input rejected by a precondition; may carry a witness"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class GroupSpecError(InvalidInputError):
    """Malformed group or algebra specification text"""

    def __init__(self, message: str, token: str = None):
        super().__init__(message, witness=token)
        self.token = token


class CapExceededError(EmforgeError):
    """An enumeration would exceed the configured cap"""

    def __init__(self, message: str, size: int, cap: int):
        super().__init__(message)
        self.size = size
        self.cap = cap


class ConsistencyError(EmforgeError):
    """A mathematically guaranteed identity failed to hold"""


class HopfAlgebraError(InvalidInputError):
    """Malformed structure constants or a violated Hopf axiom"""
