"""Exception types raised across the package."""


class BogomolovError(Exception):
    """Base class for package errors."""


class ParameterError(BogomolovError, ValueError):
    """Arguments violate an operation's preconditions."""


class BudgetExceeded(BogomolovError):
    """A requested enumeration is larger than the configured budget."""

    def __init__(self, needed, budget, what="enumeration"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what} needs {needed} steps, budget is {budget}")


class NotDecomposable(BogomolovError, ValueError):
    """A bivector is not of the form u ^ v."""


class IndeterminacyLocus(BogomolovError, ValueError):
    """The volume forms of a plane tuple do not span an r-dimensional space."""
