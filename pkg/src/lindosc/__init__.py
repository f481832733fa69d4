"""Gaussian dynamics of damped quantum oscillators.

One oscillator in a thermal bath: exact moment propagation, uncertainty
function, decoherence degree, density matrices, and decoherence time
scales.  Two independent oscillators in a common bath: covariance
dynamics, asymptotic (Lyapunov) states, and Simon separability analysis
of the environment-induced entanglement.
"""

from .core import (
    GaussianState1D,
    OscillatorParams,
    SingleModeEnv,
    ThermalParams,
    TwoModeEnvironment,
    ValidationCheck,
    ValidationReport,
    correlated_coherent_state,
    gibbs_coefficients,
    validate_single_mode,
    validate_two_mode,
)
from .errors import (
    ConfigError,
    InvalidEnvironmentError,
    LindoscError,
    ParameterError,
    ShapeError,
    SingularSystemError,
    StateError,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "GaussianState1D",
    "OscillatorParams",
    "SingleModeEnv",
    "ThermalParams",
    "TwoModeEnvironment",
    "ValidationCheck",
    "ValidationReport",
    "correlated_coherent_state",
    "gibbs_coefficients",
    "validate_single_mode",
    "validate_two_mode",
    "ConfigError",
    "InvalidEnvironmentError",
    "LindoscError",
    "ParameterError",
    "ShapeError",
    "SingularSystemError",
    "StateError",
]
