"""Harmonic oscillator under a minimal-length deformed commutator.

Spectra (relativistic and nonrelativistic), normalized momentum-space
eigenstates, and the su(1,1) ladder-operator algebra, plus a batch CLI.
"""

from .fm import (
    FmProblem,
    FmSolution,
    NoBoundStateError,
    fm_closed_condition,
    fm_exponents,
    fm_quantization_residual,
    fm_solution,
    fm_wavefunction,
)
from .gup import (
    DeformedAlgebra,
    DegenerateModelError,
    OscillatorSystem,
    UndeformedBranchError,
    fm_problem_of,
    minimal_length,
    nr_parameters,
    ode_residual,
    p_of_rho,
    rho_of_p,
    rho_of_s,
    s_of_rho,
    scalar_weight,
    tilde_params,
    uncertainty_bound,
    v_exponent,
)
from .spectrum import (
    SolverError,
    SpectrumResult,
    energy_nonrel,
    energy_relativistic,
    nr_limit_of_relativistic,
    ratio_sweep,
    rel_residual,
)
from .states import (
    NONRELATIVISTIC,
    RELATIVISTIC,
    LadderCoefficients,
    OscillatorState,
    QuadratureAccuracyError,
    Su11Report,
    apply_ladder,
    eval_state,
    eval_state_derivative,
    inner_product,
    ladder_coeffs,
    make_state,
    reference_norm,
    su11_check,
    weighted_overlap,
)

__version__ = "0.1.0"
