"""Exception types shared by every layer of the package."""

from __future__ import annotations

from typing import Any, Optional


class DerivedEqError(Exception):
    """Base class. ``witness`` carries a machine-readable counterexample."""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class ParseError(DerivedEqError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message, witness=line)
        self.line = line


class CycleError(DerivedEqError):
    """Oriented cycle in a quiver; witness is the closed vertex path."""


class RangeError(DerivedEqError):
    pass


class DimensionMismatch(DerivedEqError):
    pass


class ProjectiveInput(DerivedEqError):
    pass


class InjectiveInput(DerivedEqError):
    pass


class NotRepresentationFinite(DerivedEqError):
    pass


class NotMinimalizable(DerivedEqError):
    pass


class NotExceptional(DerivedEqError):
    pass


class WindowOverflow(DerivedEqError):
    pass


class EmptyGenerators(DerivedEqError):
    pass


class NotATorsionTheory(DerivedEqError):
    pass


class InvalidSequence(DerivedEqError):
    pass


class UnboundedAisle(DerivedEqError):
    pass


class HasExtProjectives(DerivedEqError):
    pass


class NotSerreClosed(DerivedEqError):
    pass


class NotExtProjective(DerivedEqError):
    pass


class SearchBoundExceeded(DerivedEqError):
    pass


class OracleDisagreement(DerivedEqError):
    pass


class WindowTooWide(DerivedEqError):
    pass
