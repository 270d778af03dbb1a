from __future__ import annotations

from typing import Dict


class HypNapError(Exception):
    """Base class for every error raised by the hyperbolic Napoleon package.

    Attributes:
        code: Machine-readable identifier emitted by the CLI in its error JSON.
        exit_code: Process exit status the CLI returns for this error.
        message: Human-readable description.
    """

    code = "error"
    exit_code = 2

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message

    def to_dict(self) -> Dict[str, str]:
        """Return the payload printed on stderr by the CLI."""
        return {"error": self.code, "message": self.message}


# ---- Input validation ---- #


class InvalidInput(HypNapError):
    """Malformed command-line values or input files."""

    code = "invalid_input"


class NotTimelike(HypNapError):
    """A vector expected to be timelike has ⟨v,v⟩ ≥ −tol."""

    code = "not_timelike"


class WrongSheet(HypNapError):
    """A timelike vector points to the past (x0 ≤ 0)."""

    code = "wrong_sheet"


class NotOnHyperboloid(HypNapError):
    """Coordinates that do not satisfy ⟨P,P⟩ = −1 with x0 ≥ 1."""

    code = "not_on_hyperboloid"


class InvalidIsometry(HypNapError):
    """A matrix that does not preserve the Minkowski form or the upper sheet."""

    code = "invalid_isometry"


# ---- Degenerate geometry ---- #


class DegeneratePair(HypNapError):
    code = "degenerate_pair"


class DegenerateTriangle(HypNapError):
    code = "degenerate_triangle"


class DegenerateClass(HypNapError):
    """A class with a side too close to the point limit to be realized."""

    code = "degenerate_class"


class Unrealizable(HypNapError):
    """A congruence class with no triangle behind it."""

    code = "unrealizable"


class CogeodesicClass(HypNapError):
    """A class outside the domain of the Napoleonic criterion (χ = 0)."""

    code = "cogeodesic"


class InsufficientData(HypNapError):
    code = "insufficient_data"


# ---- Internal ---- #


class ConsistencyFailure(HypNapError):
    """Two independent evaluations of the same quantity disagree.

    Signals a numerics bug, never an input problem.
    """

    code = "consistency_failure"
    exit_code = 1
