"""Quasi-exact bound states of the Klein-Gordon oscillator with a Coulomb-type
term (and optional linear scalar potential), plus a finite-difference oracle."""

from .errors import (
    BracketExhausted,
    ConvergenceFailure,
    DegenerateOperator,
    HeunboundError,
    InvalidConfig,
    InvalidDomain,
    MismatchReport,
    NegativeRadicand,
    NoPhysicalRoot,
    NotTruncated,
    ZeroCoupling,
)
from .params import HeunParams, PhysicalConfig, derive_params, truncated_params
from .series import (
    CONVENTION_HEUN,
    CONVENTION_FLIPPED,
    SeriesSolution,
    check_truncation,
    eval_radial,
    eval_series,
    frobenius_coeffs,
)
from .quantize import (
    QuantizationResult,
    Root,
    freq_case_a_general,
    freq_case_a_n1,
    freq_case_b_general,
    freq_case_b_n1,
    permitted_frequencies,
)
from .spectrum import (
    EnergyLevel,
    GridSpec,
    RadialWavefunction,
    algebraic_identity_check,
    build_wavefunction,
    energy_case_a,
    energy_case_b,
)
from .oracle import (
    OracleSpectrum,
    RadialOperatorSpec,
    build_operator,
    cross_validate,
    eigen_lowest,
)

__version__ = "0.1.0"
