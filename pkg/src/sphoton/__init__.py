"""sphoton: quantum optics of multipole radiation at any distance.

Builds the local mode structure of a pure electric or magnetic multipole
source (outgoing spherical waves), whitens the field's polarization
fluctuations into canonical position-dependent photon operators, and
evaluates photon statistics and generalized Stokes observables, with a
truncated Fock-space engine as the brute-force oracle behind every number.
"""

from .errors import (
    ConfigError,
    DarkPointError,
    DimensionLimitError,
    InputError,
    SingularityError,
    SphotonError,
    SuppressedModeError,
    UndefinedQError,
)
from .angular import clebsch_gordan, spherical_bessel, spherical_harmonic
from .modes import (
    MU_ORDER,
    PARITIES,
    ModeMatrix,
    SpatialPoint,
    helicity_basis,
    helicity_rotation,
    mode_matrix,
    zone_classify,
)
from .effective import (
    CoherentParameters,
    EffectiveTransform,
    FluctuationMatrix,
    build_effective_transform,
    coherent_parameters,
    diagonalize_fluctuation,
    effective_transform,
    fluctuation_matrix,
    phase_reduced_realness,
)
from .fock import (
    FockSpace,
    FockState,
    OperatorMatrix,
    apply_annihilator,
    apply_creator,
    apply_mode_annihilator,
    apply_mode_creator,
    coherent_state,
    composite_annihilator,
    expectation,
    fock_basis_state,
    identity,
    mode_annihilator,
    mode_number,
    occupation_projector,
    state_from_amplitudes,
    vacuum_state,
    variance,
)
from .observables import (
    PolarizationMatrices,
    StokesReport,
    mandel_q,
    polarization_matrices,
    stokes_means,
    stokes_operators,
    stokes_variance_report,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "SphotonError", "InputError", "SingularityError", "DarkPointError",
    "SuppressedModeError", "UndefinedQError", "DimensionLimitError", "ConfigError",
    # angular
    "clebsch_gordan", "spherical_harmonic", "spherical_bessel",
    # modes
    "MU_ORDER", "PARITIES", "SpatialPoint", "ModeMatrix", "helicity_basis",
    "helicity_rotation", "mode_matrix", "zone_classify",
    # effective
    "FluctuationMatrix", "EffectiveTransform", "CoherentParameters",
    "fluctuation_matrix", "diagonalize_fluctuation", "effective_transform",
    "build_effective_transform", "coherent_parameters", "phase_reduced_realness",
    # fock
    "FockSpace", "FockState", "OperatorMatrix", "identity", "mode_annihilator",
    "mode_number", "composite_annihilator", "occupation_projector", "vacuum_state",
    "fock_basis_state", "coherent_state", "state_from_amplitudes", "expectation",
    "variance", "apply_mode_annihilator", "apply_mode_creator", "apply_annihilator",
    "apply_creator",
    # observables
    "PolarizationMatrices", "StokesReport", "mandel_q", "polarization_matrices",
    "stokes_operators", "stokes_means", "stokes_variance_report",
]
