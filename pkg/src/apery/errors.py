"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain an operation is defined on."""


class Obstructed(ArithmeticError):
    """A recurrence cannot be solved because its leading coefficient vanishes."""

    def __init__(self, m):
        super().__init__(f"leading recurrence coefficient P0({m}) vanishes")
        self.m = m


class AmbiguousFit(ArithmeticError):
    """An operator fit found a nullspace of dimension greater than one."""

    def __init__(self, basis):
        super().__init__(f"operator nullspace has dimension {len(basis)}; supply more terms")
        self.basis = basis


class CaseFormatError(ValueError):
    """A case file does not follow the case file grammar."""


class CaseLoadError(ValueError):
    """A case file parsed but failed one of its on-load checks."""
