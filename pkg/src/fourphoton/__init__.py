"""Four-photon statistics of pulsed parametric down-conversion."""

from .errors import (
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    EmptyRunError,
    FourPhotonError,
    OutOfRangeError,
    PreconditionError,
    TruncationError,
)
from .fock import (
    MultiProcessState,
    SqueezedProcess,
    chi_from_fock,
    four_photon_decomposition,
    poisson_limit_check,
    probabilities,
    sector_norms,
)
from .moments import (
    KernelMatrix,
    MomentConfig,
    MomentResult,
    build_kernel,
    chi_closed_form,
    chi_quadrature,
    chi_unfiltered,
    compute_moments,
    gaussian_intermediates,
    gaussian_setup,
)
from .spectra import (
    FrequencyGrid,
    GaussianFilter,
    GaussianPump,
    JointAmplitude,
    PhaseMatching,
    TabulatedFilter,
    TabulatedProfile,
    coherence_time_from_filter,
    eval_joint,
    make_gaussian_filter,
    make_gaussian_pump,
    operating_point,
)

__version__ = "0.1.0"
