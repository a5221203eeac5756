"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class SingularityError(ArithmeticError):
    """Evaluation requested too close to a pole.

    ``distance`` is the Euclidean distance from the argument to the
    nearest pole.
    """

    def __init__(self, message, distance):
        super().__init__(f"{message} (distance to pole {distance:.3e})")
        self.distance = distance


class PrecisionError(ArithmeticError):
    """Requested parameters would spoil the accuracy of a numerical estimate."""


class ConvergenceError(ArithmeticError):
    """An iteration or series did not converge within its budget."""
