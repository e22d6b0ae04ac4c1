"""Exception types shared by every module.

The CLI maps PrecisionError to exit status 2; everything else that signals a
failed check maps to 1.
"""


class RZError(Exception):
    pass


class PrecisionError(RZError):
    """An intermediate result needed more p-adic digits than the working precision."""


class DomainError(RZError, ValueError):
    """Input outside the domain of an operation (wrong prime, wrong type, wrong height)."""


class DegenerateError(RZError, ValueError):
    """Generators do not span a full-rank lattice."""


class ContainmentError(RZError, ValueError):
    pass


class InconsistencyError(RZError):
    """A structural assertion failed; indicates a bug or an invalid input lattice."""
