class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BasisMismatchError(TypeError):
    """Objects built on different number-state bases were combined."""
