"""Exception types shared across the package.

``ParameterError`` and ``DomainError`` cover bad user inputs (CLI exit
code 2); ``NumericError`` and its subclasses cover computations that did
not converge or were requested outside their region of validity (exit
code 3).
"""


class ParameterError(ValueError):
    """Inadmissible model parameters; message names the violated constraint."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class NumericError(ArithmeticError):
    """A numerical routine failed to reach its accuracy target."""


class DivergenceError(NumericError):
    """An integral or transform was requested where it diverges."""


class BracketError(NumericError):
    """Root bracketing failed: no sign change on the search interval."""
