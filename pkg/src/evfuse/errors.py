"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed frame, proposition, mass assignment, or scenario."""


class ExpressionError(ValidationError):
    """Proposition expression rejected by the parser."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class TotalConflictError(ArithmeticError):
    """Combination undefined: every conjunctive term is in conflict."""
