"""Exception hierarchy shared by all modules."""


class RandmapsError(Exception):
    """Base class for errors raised by this package."""


class InvalidParameterError(RandmapsError, ValueError):
    pass


class ShapeError(RandmapsError, ValueError):
    pass


class InvalidInputError(RandmapsError, ValueError):
    pass


class DegenerateInputError(RandmapsError, ValueError):
    pass


class KindMismatchError(RandmapsError, TypeError):
    pass


class ConfigError(RandmapsError, ValueError):
    pass


class ContractViolation(RandmapsError, ArithmeticError):
    """A numerical contract (identity, tolerance, structure) was not met."""


class AccuracyError(ContractViolation):
    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class BasisInconsistencyError(ContractViolation):
    pass


class StructureViolationError(ContractViolation):
    pass


class NonConvergenceError(ContractViolation):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
