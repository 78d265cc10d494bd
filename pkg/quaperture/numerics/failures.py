"""Exception base classes shared by all numeric kernels."""

__all__ = ["NumericalFailure"]


class NumericalFailure(ArithmeticError):
    """Base class of all errors raised because a numeric procedure did not reach its accuracy contract.

    The command line interface maps these to exit code 3. Configuration and validation errors derive from
    ValueError instead."""
