"""Exception hierarchy shared across the package.

The CLI maps these onto distinct exit codes (see ``trapprob.cli``):
DomainError -> 1, HypothesisError -> 2, ConvergenceError -> 3.
"""


class TrapProbError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TrapProbError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BoundaryError(DomainError):
    """A point lies on (or numerically indistinguishable from) the trap."""


class HypothesisError(TrapProbError, RuntimeError):
    """A theorem's hypothesis is not satisfied by the requested parameters."""


class ConvergenceError(TrapProbError, RuntimeError):
    """An iterative scheme exhausted its budget before reaching tolerance."""
