"""Exception hierarchy."""


class BOError(Exception):
    """Base class for all toolkit errors."""


class SpectrumError(BOError):
    """Eigen-solver failure or a spectral invariant broken by truncation."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DegenerateSpectrumError(SpectrumError):
    pass


class PhaseChainError(SpectrumError):
    """Normalization chain of the eigenvectors cannot be continued."""


class ScalingFactorError(SpectrumError):
    pass


class ConvergenceError(BOError):
    """Iterative solver did not reach its tolerance."""

    def __init__(self, message, residual=None, time=None):
        super().__init__(message)
        self.residual = residual
        self.time = time


class ConditioningError(BOError):
    pass


class BlowUpError(BOError):
    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
