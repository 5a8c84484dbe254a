class PoleError(ValueError):
    """Evaluation requested at a pole."""


class AccuracyError(ArithmeticError):
    """A built-in accuracy sentinel tripped."""


class IncompleteError(RuntimeError):
    """A zero search could not be certified complete."""
