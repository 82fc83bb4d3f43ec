"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called with inputs violating its contract."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (non-convergence, infeasibility, ...)."""


class DecompositionError(NumericalError):
    """Extremal decomposition did not finish; carries the partial result.

    Attributes
    ----------
    partial : list
        (weight, povm) terms extracted before the failure.
    residual : float
        Weight not yet accounted for by the partial terms.
    """

    def __init__(self, message, partial=None, residual=None):
        super().__init__(message)
        self.partial = partial if partial is not None else []
        self.residual = residual
