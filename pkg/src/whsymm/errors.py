"""Exception types shared across the package.

Errors are split by how a caller should react: document/input problems,
mathematically ill-posed inputs, unsupported requests, and numerical
resolution failures.  The CLI maps these onto distinct exit codes.
"""

from __future__ import annotations


class WhsymmError(Exception):
    """Base class for all package errors."""


class DocumentError(WhsymmError):
    """A JSON document or CLI argument could not be parsed or validated."""


class GroupConstructionError(WhsymmError):
    """A Cayley table violates a group law; the message names the first failure."""


class UnsupportedGroupError(WhsymmError):
    """The request needs data (e.g. a representation set) we do not have
    for this group, or the group exceeds the supported size cap."""


class RepValidationError(WhsymmError):
    """A representation set is structurally inconsistent with its group."""


class SymbolDivisionError(WhsymmError):
    """Division by the identically-zero symbol."""


class DegreeCapError(WhsymmError):
    """Polynomial degree exceeds the supported root-finding cap."""


class NotInvertibleOnCircleError(WhsymmError):
    """A symbol has a zero or pole too close to the unit circle for a
    winding index to be trusted."""


class PoleOnGridError(WhsymmError):
    """Evaluation requested at a grid point that is (numerically) a pole."""


class UndersampledError(WhsymmError):
    """A grid-based phase sum did not round cleanly to an integer; the
    sampling rate is too low for this symbol."""


class IllPosedSymbolError(WhsymmError):
    """A block or class component is not invertible on the circle, so the
    factorization problem has no solution.  ``where`` names the component."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(message)
        self.where = where


class PartialFactorizationError(WhsymmError):
    """Full factorization was requested but some block is outside the
    factorable catalog.  Carries the index report that is still available."""

    def __init__(self, message: str, index_report=None):
        super().__init__(message)
        self.index_report = index_report
