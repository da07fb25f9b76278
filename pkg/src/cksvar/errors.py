"""Exception hierarchy shared across the package.

Everything that signals a violated model contract derives from
:class:`CksvarError`, so callers (and the CLI) can distinguish "the input
model is bad" from ordinary I/O problems.
"""


class CksvarError(ValueError):
    """Base class for model-contract violations."""


class DimensionMismatchError(CksvarError):
    """Array shapes inconsistent with the declared (p, k)."""


class DgpError(CksvarError):
    """Coherence or sign-normalisation check failed; names the failing check."""


class CaseError(CksvarError):
    """Operation called on a model whose rank configuration does not support it."""


class AssumptionViolationError(CksvarError):
    """A regularity condition (invertibility, determinant sign, kink continuity) fails."""


class CoherenceError(CksvarError):
    """Simultaneous-system solve found no (or two) sign-consistent branches."""

    def __init__(self, t: int, message: str):
        self.t = t
        super().__init__(f"t={t}: {message}")


class ModelFileError(CksvarError):
    """Model file is malformed (ragged arrays, missing keys, bad shapes)."""
