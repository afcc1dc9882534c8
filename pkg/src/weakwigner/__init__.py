"""Cross-Wigner transforms, weak values and phase-space reconstruction on a uniform grid."""

from .coherent import (
    amplification_bound,
    chi_phase,
    cross_wigner_antipodal,
    fiducial_wigner,
    overlap_antipodal,
    rho_antipodal,
)
from .errors import (
    ConditioningError,
    ConfigError,
    ContainmentError,
    CoverageError,
    GridMismatchError,
    OrthogonalityError,
    WeakWignerError,
)
from .evolve import Free, Harmonic, Potential, TwoStateScenario, propagate, sweep, two_state_weak_value
from .grid import (
    GridSpec,
    PhaseSpacePoint,
    WaveFunction,
    gaussian_coherent,
    grossmann_royer,
    hbar_fourier,
    heisenberg_weyl,
    hermite_basis,
    inner_product,
)
from .reconstruct import ReconstructionInput, phase_align, reconstruct
from .weakval import (
    Observable,
    compare_methods,
    convex_sum_check,
    expectation,
    rho,
    weak_value_direct,
    weak_value_quadrature,
    weyl_apply_gr,
)
from .xwigner import PhaseSpaceField, compass_wigner, cross_wigner, wigner

__version__ = "0.1.0"

__all__ = [
    "amplification_bound",
    "chi_phase",
    "compare_methods",
    "compass_wigner",
    "ConditioningError",
    "ConfigError",
    "ContainmentError",
    "convex_sum_check",
    "CoverageError",
    "cross_wigner",
    "cross_wigner_antipodal",
    "expectation",
    "fiducial_wigner",
    "Free",
    "gaussian_coherent",
    "GridMismatchError",
    "GridSpec",
    "grossmann_royer",
    "Harmonic",
    "hbar_fourier",
    "heisenberg_weyl",
    "hermite_basis",
    "inner_product",
    "Observable",
    "OrthogonalityError",
    "overlap_antipodal",
    "phase_align",
    "PhaseSpaceField",
    "PhaseSpacePoint",
    "Potential",
    "propagate",
    "reconstruct",
    "ReconstructionInput",
    "rho",
    "rho_antipodal",
    "sweep",
    "two_state_weak_value",
    "TwoStateScenario",
    "WaveFunction",
    "weak_value_direct",
    "weak_value_quadrature",
    "WeakWignerError",
    "weyl_apply_gr",
    "wigner",
]
