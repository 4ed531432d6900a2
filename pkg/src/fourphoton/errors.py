"""Exception and warning types shared across the package."""


class FourPhotonError(Exception):
    """Base class for all errors raised by fourphoton."""


class DomainError(FourPhotonError, ValueError):
    """An argument lies outside the domain of the operation."""


class OutOfRangeError(DomainError):
    """A tabulated profile was queried outside its sampled grid."""


class DegenerateInputError(FourPhotonError, ValueError):
    """Inputs are well-typed but make the requested quantity undefined."""


class PreconditionError(FourPhotonError, ValueError):
    """A physical precondition of the model is violated."""


class TruncationError(FourPhotonError):
    """A truncated Fock expansion leaves more probability out than allowed."""

    def __init__(self, message, tail_bound):
        super().__init__(message)
        self.tail_bound = tail_bound


class ConvergenceError(FourPhotonError):
    """A quadrature did not converge under grid refinement."""

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate


class EmptyRunError(FourPhotonError, ValueError):
    """A simulation was asked to run with nothing to simulate."""


class GaussianApproximationWarning(UserWarning):
    """A Gaussian-profile approximation is being used outside its comfort zone."""


class ExchangeTermWarning(UserWarning):
    """Signal and idler windows overlap, so the dropped exchange term may matter."""


class HighGainWarning(UserWarning):
    """Pair probability is large enough that six-photon events are not negligible."""
