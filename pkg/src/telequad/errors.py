"""Exception types raised across the package."""


class TelequadError(Exception):
    """Base class for domain errors."""


class WrongLeadingCoefficient(TelequadError, ValueError):
    pass


class DegenerateInterval(TelequadError, ValueError):
    pass


class InsufficientDerivativeOrder(TelequadError, ValueError):
    pass


class OracleNoConvergence(TelequadError, ArithmeticError):
    pass


class NoRootInUnitInterval(TelequadError, ValueError):
    pass


class UnknownKind(TelequadError, ValueError):
    pass


class InsufficientGrid(TelequadError, ValueError):
    pass


class EvaluationDomainError(TelequadError, ArithmeticError):
    pass


class ExprSyntaxError(TelequadError, ValueError):
    """Parse failure; ``position`` is the 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownFunction(ExprSyntaxError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown function {name!r}", position)
        self.name = name
