"""Cloning of coherent states with phase-conjugate inputs.

Gaussian states and symplectic maps, linear canonical transforms, an
explicit multimode cloning machine with its closed-form noise theory,
numerical searches for the optimal amplifier and input asymmetry, and a
Monte-Carlo phase-space verifier.
"""

from .canonical import (
    CanonicalTransform,
    commutation_residual,
    compose,
    dft_transform,
    embed,
    identity_transform,
    pcia_transform,
    to_symplectic,
)
from .errors import ConvergenceError, DomainError
from .gaussian import (
    GaussianState,
    SymplecticMap,
    apply_map,
    coherent_state,
    fidelity_with_coherent,
    marginal,
    quadrature_variance,
    symplectic_form,
    vacuum_state,
)
from .machine import (
    CloningConfig,
    MachineLayout,
    NoiseReport,
    asymmetry_gain,
    build_machine,
    gain_from_amplitudes,
    gain_from_counts,
    measurement_noise,
    noise_report,
    p_function_density,
)
from .montecarlo import (
    ComparisonSummary,
    EmpiricalMoments,
    SampleConfig,
    compare_to_analytic,
    simulate,
)
from .optimize import (
    AsymmetryResult,
    SearchResult,
    minimize_asymmetry,
    solve_amplifier,
)

__version__ = "0.1.0"

__all__ = [
    "AsymmetryResult",
    "CanonicalTransform",
    "CloningConfig",
    "ComparisonSummary",
    "ConvergenceError",
    "DomainError",
    "EmpiricalMoments",
    "GaussianState",
    "MachineLayout",
    "NoiseReport",
    "SampleConfig",
    "SearchResult",
    "SymplecticMap",
    "apply_map",
    "asymmetry_gain",
    "build_machine",
    "coherent_state",
    "commutation_residual",
    "compare_to_analytic",
    "compose",
    "dft_transform",
    "embed",
    "fidelity_with_coherent",
    "gain_from_amplitudes",
    "gain_from_counts",
    "identity_transform",
    "marginal",
    "measurement_noise",
    "minimize_asymmetry",
    "noise_report",
    "p_function_density",
    "pcia_transform",
    "quadrature_variance",
    "simulate",
    "solve_amplifier",
    "symplectic_form",
    "to_symplectic",
    "vacuum_state",
]
