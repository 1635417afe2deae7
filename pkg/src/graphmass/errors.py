"""Exception types shared across the package.

The CLI maps these onto process exit codes: configuration problems are
exit code 1, quadrature non-convergence is 2, violated mathematical
preconditions (points outside a function's domain, non-constant boundary
values, non-integrable decay) are 3.
"""


class GraphMassError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(GraphMassError):
    """Malformed or inconsistent run configuration."""


class NotSPDError(GraphMassError):
    """A matrix expected to be symmetric positive definite is not."""


class DomainError(GraphMassError):
    """A point lies outside the domain of definition of a map."""


class ParseError(ConfigError):
    """Syntax or semantic error in an expression string.

    Carries the 0-based character position of the offending token.
    """

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class PreconditionError(GraphMassError):
    """A mathematical hypothesis required by a formula does not hold."""


class ConvergenceError(GraphMassError):
    """Successive quadrature refinements failed to agree."""
