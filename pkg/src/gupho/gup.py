"""Minimal-length model: deformed algebra, transforms, and reduction to the standard form.

The commutator [x, p] = i hbar (1 + eta p^2) implies a smallest resolvable
length hbar sqrt(eta).  In momentum space the position operator carries an
arbitrary representation parameter gamma that enters only through the weight
of the scalar product, never the spectrum.  The oscillator problem reduces,
through the chain p -> rho -> s, to the standard form solved by `fm`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fm import FmProblem

__all__ = [
    "DeformedAlgebra",
    "OscillatorSystem",
    "UndeformedBranchError",
    "DegenerateModelError",
    "minimal_length",
    "uncertainty_bound",
    "scalar_weight",
    "rho_of_p",
    "p_of_rho",
    "s_of_rho",
    "rho_of_s",
    "tilde_params",
    "fm_problem_of",
    "v_exponent",
    "nr_parameters",
    "ode_residual",
]


class UndeformedBranchError(ValueError):
    """A deformed-only quantity was requested at eta = 0.

    The transform chain divides by eta; callers must use the closed-form
    undeformed limits instead.
    """


class DegenerateModelError(ValueError):
    """Derived state parameters (weight order or prefactor exponent) are not positive."""


@dataclass(frozen=True)
class DeformedAlgebra:
    """Deformation parameter eta (1/momentum^2), representation parameter gamma, hbar."""

    eta: float
    gamma: float = 0.0
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if not (self.eta >= 0.0 and math.isfinite(self.eta)):
            raise ValueError("eta must be finite and >= 0")
        if not (self.hbar > 0.0 and math.isfinite(self.hbar)):
            raise ValueError("hbar must be finite and > 0")
        if not math.isfinite(self.gamma):
            raise ValueError("gamma must be finite")

    @property
    def deformed(self) -> bool:
        return self.eta > 0.0

    @property
    def alpha(self) -> float:
        """Weight exponent gamma/eta of the momentum-space scalar product."""
        self._require_deformed()
        return self.gamma / self.eta

    def _require_deformed(self) -> None:
        if self.eta == 0.0:
            raise UndeformedBranchError(
                "operation is defined only for eta > 0; use the undeformed branch"
            )


@dataclass(frozen=True)
class OscillatorSystem:
    """Oscillator of a given mass (reduced mass in the nonrelativistic case) and frequency."""

    mass: float
    omega: float
    algebra: DeformedAlgebra

    def __post_init__(self) -> None:
        if not (self.mass > 0.0 and math.isfinite(self.mass)):
            raise ValueError("mass must be finite and > 0")
        if not (self.omega > 0.0 and math.isfinite(self.omega)):
            raise ValueError("omega must be finite and > 0")


def minimal_length(algebra: DeformedAlgebra) -> float:
    """Smallest position uncertainty hbar sqrt(eta)."""
    return algebra.hbar * math.sqrt(algebra.eta)


def uncertainty_bound(algebra: DeformedAlgebra, delta_p: float) -> float:
    """Lower bound on delta_x: (hbar/2) (1/delta_p + eta delta_p).

    Minimized over delta_p (at 1/sqrt(eta)) this reproduces `minimal_length`.
    """
    if not delta_p > 0.0:
        raise ValueError("delta_p must be > 0")
    return 0.5 * algebra.hbar * (1.0 / delta_p + algebra.eta * delta_p)


def scalar_weight(algebra: DeformedAlgebra, p: float) -> float:
    """Measure weight (1 + eta p^2)^(alpha - 1) of the scalar product."""
    algebra._require_deformed()
    return (1.0 + algebra.eta * p * p) ** (algebra.alpha - 1.0)


def rho_of_p(algebra: DeformedAlgebra, p: float) -> float:
    """Compact momentum coordinate rho = p sqrt(eta) / sqrt(1 + eta p^2) in (-1, 1)."""
    algebra._require_deformed()
    t = p * math.sqrt(algebra.eta)
    return t / math.sqrt(1.0 + t * t)


def p_of_rho(algebra: DeformedAlgebra, rho: float) -> float:
    """Inverse of `rho_of_p`: p = rho / (sqrt(eta) sqrt(1 - rho^2))."""
    algebra._require_deformed()
    if not -1.0 < rho < 1.0:
        raise ValueError("rho must lie in (-1, 1)")
    return rho / (math.sqrt(algebra.eta) * math.sqrt(1.0 - rho * rho))


def s_of_rho(rho: float) -> float:
    """Unit-interval coordinate s = (1 - rho)/2 used by the standard form."""
    return 0.5 * (1.0 - rho)


def rho_of_s(s: float) -> float:
    return 1.0 - 2.0 * s


def tilde_params(system: OscillatorSystem, energy_rel: float) -> tuple[float, float]:
    """Coefficient pair (A~, B~) of the reduced momentum-space wave equation.

    A~ = 2 / (hbar^2 m omega^2 (E + m)) - gamma (gamma + eta)
    B~ = -(2 (E^2 - m^2) / (hbar^2 m omega^2 (E + m)) + gamma)
    """
    m = system.mass
    if not energy_rel + m > 0.0:
        raise ValueError("requires energy_rel + mass > 0")
    alg = system.algebra
    denom = alg.hbar**2 * m * system.omega**2 * (energy_rel + m)
    a_tilde = 2.0 / denom - alg.gamma * (alg.gamma + alg.eta)
    b_tilde = -(2.0 * (energy_rel**2 - m**2) / denom + alg.gamma)
    return a_tilde, b_tilde


def fm_problem_of(system: OscillatorSystem, energy_rel: float) -> FmProblem:
    """Map the oscillator at trial energy onto the standard-form coefficients.

    k1 = 1/2 - gamma/eta, k2 = 2 k1, k3 = 1, A = (B~ eta - A~)/eta^2 = -B,
    C = -A~ / (4 eta^2).
    """
    alg = system.algebra
    alg._require_deformed()
    a_tilde, b_tilde = tilde_params(system, energy_rel)
    k1 = 0.5 - alg.gamma / alg.eta
    a_coef = (b_tilde * alg.eta - a_tilde) / alg.eta**2
    return FmProblem(
        k1=k1,
        k2=2.0 * k1,
        k3=1.0,
        A=a_coef,
        B=-a_coef,
        C=-a_tilde / (4.0 * alg.eta**2),
    )


def v_exponent(system: OscillatorSystem, energy_rel: float) -> float:
    """Closed form of the common exponent k4 = k5 for the oscillator problem.

    1/4 + gamma/(2 eta) + (1/2) sqrt(1/4 + 2/(m omega^2 eta^2 hbar^2 (E + m))).
    Agrees with `fm_exponents(fm_problem_of(...))` componentwise.
    """
    alg = system.algebra
    alg._require_deformed()
    m = system.mass
    if not energy_rel + m > 0.0:
        raise ValueError("requires energy_rel + mass > 0")
    rad = 0.25 + 2.0 / (m * system.omega**2 * alg.eta**2 * alg.hbar**2 * (energy_rel + m))
    return 0.25 + alg.gamma / (2.0 * alg.eta) + 0.5 * math.sqrt(rad)


def nr_parameters(system: OscillatorSystem) -> tuple[float, float]:
    """Nonrelativistic prefactor exponent v and Gegenbauer order lam = 2v - gamma/eta.

    v = 1/4 + gamma/(2 eta) + (1/2) sqrt(1/4 + 1/(mu omega eta hbar)^2); the
    gamma shift cancels in lam, which is therefore >= 1 for physical inputs.
    """
    alg = system.algebra
    alg._require_deformed()
    rad = 0.25 + 1.0 / (system.mass * system.omega * alg.eta * alg.hbar) ** 2
    v = 0.25 + alg.gamma / (2.0 * alg.eta) + 0.5 * math.sqrt(rad)
    lam = 2.0 * v - alg.gamma / alg.eta
    if lam <= 0.0:
        raise DegenerateModelError(f"weight order lam = {lam!r} must be positive")
    return v, lam


def ode_residual(
    system: OscillatorSystem,
    energy_rel: float,
    state_eval: Callable[[float], float],
    p: float,
) -> float:
    """Residual of the reduced wave equation at momentum p for a trial state.

    phi'' + 2 (gamma + eta) p / (1 + eta p^2) phi'
          - (B~ + p^2 A~) / (1 + eta p^2)^2 phi

    with ``state_eval`` mapping rho to the wavefunction value and derivatives
    taken by symmetric differences at relative step 1e-5.  Stencil points are
    prepared in extended precision; dtype-preserving evaluators (such as
    `states.eval_state`) then keep the rounding noise of the second
    difference well below the verification thresholds.
    """
    alg = system.algebra
    alg._require_deformed()
    ld = np.longdouble
    pl = ld(p)
    h = ld(1e-5) * max(ld(1.0), abs(pl))
    root_eta = np.sqrt(ld(alg.eta))

    def phi(q):
        t = q * root_eta
        return state_eval(t / np.sqrt(1.0 + t * t))

    ph = pl + h
    pm = pl - h
    f0 = phi(pl)
    fp = phi(ph)
    fm_ = phi(pm)
    d1 = (fp - fm_) / (ph - pm)
    # exact three-point formulas for the (slightly) unequal rounded steps
    d2 = 2.0 * (fm_ * (ph - pl) - f0 * (ph - pm) + fp * (pl - pm)) / (
        (pl - pm) * (ph - pl) * (ph - pm)
    )
    a_tilde, b_tilde = tilde_params(system, energy_rel)
    weight = 1.0 + ld(alg.eta) * pl * pl
    res = d2 + 2.0 * (ld(alg.gamma) + ld(alg.eta)) * pl / weight * d1 \
        - (ld(b_tilde) + pl * pl * ld(a_tilde)) / (weight * weight) * f0
    return float(res)
