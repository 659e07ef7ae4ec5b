"""Shared exception types for the polydom package."""

from __future__ import annotations


class PolydomError(Exception):
    """Base class for all domain errors raised by this package."""


class EmptyBoard(PolydomError):
    """A board was constructed with no cells."""


class Disconnected(PolydomError):
    """The cells do not form a face-connected polycube."""


class DimMismatch(PolydomError):
    """A coordinate tuple does not match the declared dimension."""


class NotTwoDimensional(PolydomError):
    """A 2D-only operation was applied to a higher-dimensional board."""


class ParseError(PolydomError):
    """A board or placement file could not be parsed.

    Carries an optional (line, offset) location for diagnostics.
    """

    def __init__(self, message: str, line: int | None = None, offset: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", offset {offset}" if offset is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.offset = offset


class OffBoardPiece(PolydomError):
    """A placement references a cell that is not on the board."""


class TooLarge(PolydomError):
    """An exhaustive operation was asked to run above its size cap."""


class NotP3SAT3(PolydomError):
    """A SAT instance violates the planar-3SAT-with-3-occurrences restrictions."""


class NonPlanar(PolydomError):
    """The variable-clause incidence graph of a SAT instance is not planar."""


class RoutingFailed(PolydomError):
    """The gadget router could not embed the instance in its layout family."""


class LemmaViolated(PolydomError):
    """A gadget template failed its declared optimum/optima-count check."""


class NotSatisfying(PolydomError):
    """An assignment does not satisfy the SAT instance."""


class NotOptimal(PolydomError):
    """A placement does not achieve the reduction target."""
