"""Precision limits and optimal single-photon pulses for quantum emitter
spectroscopy: susceptibility and scattering of a pulse by an emitter,
quantum Fisher information of a pulse for linewidth/detuning estimation,
the universal precision bounds, and the delta-pair pulses saturating them.
"""

from .emitter import (
    EmitterModel,
    ParameterTag,
    SpectralDecomposition,
    d_susceptibility,
    emitter_from_json,
    kernel_freq,
    kernel_time,
    kernel_time_samples,
    response,
    susceptibility,
    susceptibility_spectral,
)
from .errors import (
    GridTooCoarseError,
    InvalidPulseError,
    InvariantViolation,
    NoRootCertifiedError,
    OptimizerFailureError,
    PoleProximityError,
    QspecError,
    StepTooLargeWarning,
    WindowTooSmallError,
    ZeroFieldError,
)
from .pulses import (
    DecayingExp,
    DeltaPair,
    Gaussian,
    Rectangular,
    RisingExp,
    SampledField,
    Tabulated,
    TimeRectangular,
    amplitude,
    build_grid,
    delta_kernel,
    normalize,
    pulse_from_json,
    tabulated_from_csv,
)
from .qfi import (
    QfiResult,
    bandwidth_sweep,
    evaluate,
    far_detuned_frequency,
    optimal_pulse,
    qfi_bound,
    qfi_fidelity_oracle,
    qfi_pulse,
    sweep_kappa,
)
from .scattering import ScatterResult, encoding_phase, scatter_freq, scatter_time
from .search import BracketSet, ExtremaResult, brackets, find_extrema, solve_chi_equals

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
