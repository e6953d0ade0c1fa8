"""Normalized momentum-space eigenstates and their su(1,1) ladder structure.

A state is phi_n(rho) = N ((1 - rho^2)/4)^v C_n^lam(rho) with lam = 2v -
gamma/eta.  The norm N is fixed numerically so that the weighted momentum
integral of |phi_n|^2 equals one; the closed-form constant `reference_norm`
is kept for comparison only, since it differs from the weighted integral by
a global (n-independent) factor.

First-order ladder operators shift n by one with coefficients
l- = sqrt(n (2 lam + n - 1)) and l+ = sqrt((n+1) (2 lam + n)); together with
l0 = lam + n they realize the su(1,1) commutation relations, checked on the
coefficient level by `su11_check`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .gup import (
    DegenerateModelError,
    OscillatorSystem,
    nr_parameters,
    v_exponent,
)
from .spectrum import energy_nonrel, energy_relativistic

__all__ = [
    "RELATIVISTIC",
    "NONRELATIVISTIC",
    "DEFAULT_QUAD_ORDER",
    "OscillatorState",
    "LadderCoefficients",
    "Su11Report",
    "QuadratureAccuracyError",
    "make_state",
    "eval_state",
    "eval_state_derivative",
    "weighted_overlap",
    "inner_product",
    "reference_norm",
    "ladder_coeffs",
    "apply_ladder",
    "su11_check",
]

RELATIVISTIC = "relativistic"
NONRELATIVISTIC = "nonrelativistic"

DEFAULT_QUAD_ORDER = 200


class QuadratureAccuracyError(RuntimeError):
    """Order-doubling changed an inner product by more than the accuracy gate."""


@dataclass(frozen=True)
class OscillatorState:
    """One normalized eigenstate, evaluable at rho in (-1, 1)."""

    system: OscillatorSystem
    branch: str
    n: int
    v: float
    lam: float
    norm: float
    energy: float


@dataclass(frozen=True)
class LadderCoefficients:
    """Shift coefficients at quantum number n for a given weight order."""

    l_minus: float
    l_plus: float
    l_zero: float


def make_state(
    system: OscillatorSystem,
    n: int,
    branch: str,
    order: int = DEFAULT_QUAD_ORDER,
) -> OscillatorState:
    """Build the normalized state for quantum number n on the chosen branch.

    The relativistic branch solves the implicit spectrum first and derives
    the exponent from the converged energy; the nonrelativistic branch uses
    the closed-form parameters.  The norm comes from quadrature of the
    weighted momentum integral, not from the closed-form constant.
    """
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    alg = system.algebra
    alg._require_deformed()
    if branch == RELATIVISTIC:
        energy = energy_relativistic(system, n).energy
        v = v_exponent(system, energy)
    elif branch == NONRELATIVISTIC:
        energy = energy_nonrel(system, n).energy
        v, _ = nr_parameters(system)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    lam = 2.0 * v - alg.gamma / alg.eta
    if lam <= 0.0:
        raise DegenerateModelError(f"weight order lam = {lam!r} must be positive")
    if v <= 0.0:
        raise DegenerateModelError(f"prefactor exponent v = {v!r} must be positive")
    raw = _raw_overlap(system, n, v, lam, n, v, lam, order)
    if not raw > 0.0:
        raise QuadratureAccuracyError(f"raw norm integral is not positive: {raw!r}")
    return OscillatorState(
        system=system, branch=branch, n=n, v=v, lam=lam,
        norm=1.0 / math.sqrt(raw), energy=energy,
    )


def eval_state(state: OscillatorState, rho):
    """phi_n(rho) = norm ((1 - rho^2)/4)^v C_n^lam(rho).

    Accepts a scalar or ndarray; float dtypes (including longdouble) pass
    through, so finite-difference probes can evaluate in extended precision.
    """
    arr = np.asarray(rho)
    if arr.dtype.kind != "f":
        arr = arr.astype(np.float64)
    if np.any(np.abs(arr) >= 1.0):
        raise ValueError("rho must lie in (-1, 1)")
    omr2 = 1.0 - arr * arr
    out = state.norm * (omr2 / 4.0) ** state.v * specfun.gegenbauer(state.n, state.lam, arr)
    return out[()] if arr.ndim == 0 else out


def eval_state_derivative(state: OscillatorState, rho):
    """d phi_n / d rho by the product rule on the prefactor and the polynomial."""
    arr = np.asarray(rho)
    if arr.dtype.kind != "f":
        arr = arr.astype(np.float64)
    if np.any(np.abs(arr) >= 1.0):
        raise ValueError("rho must lie in (-1, 1)")
    omr2 = 1.0 - arr * arr
    poly_part = state.norm * (omr2 / 4.0) ** state.v * specfun.gegenbauer_derivative(
        state.n, state.lam, arr
    )
    out = poly_part - 2.0 * state.v * arr / omr2 * eval_state(state, arr)
    return out[()] if arr.ndim == 0 else out


def _raw_overlap(system, n_a, v_a, lam_a, n_b, v_b, lam_b, order):
    """Weighted momentum overlap with unit norms, mapped to rho quadrature.

    The measure weight (1 + eta p^2)^(alpha - 1) becomes (1 - rho^2)^(1 - alpha)
    and the exact Jacobian is dp = d rho / (sqrt(eta) (1 - rho^2)^(3/2)); all
    powers of 1 - rho^2 are aggregated before exponentiation so the endpoint
    nodes of the mapped rule neither overflow nor produce 0 * inf.
    """
    alg = system.algebra
    nodes, weights, omx2 = specfun.sine_mapped_rule(order)
    expo = v_a + v_b + (1.0 - alg.alpha) - 1.5
    vals = omx2**expo * specfun.gegenbauer(n_a, lam_a, nodes) * specfun.gegenbauer(n_b, lam_b, nodes)
    scale = 4.0 ** (-(v_a + v_b)) / math.sqrt(alg.eta)
    return scale * specfun.symmetric_dot(weights, vals)


def _require_compatible(a: OscillatorState, b: OscillatorState) -> None:
    if a.system != b.system or a.branch != b.branch:
        raise ValueError("states must share the same system and branch")


def weighted_overlap(a: OscillatorState, b: OscillatorState, order: int = DEFAULT_QUAD_ORDER) -> float:
    """<a|b> under the weighted momentum measure, at a single quadrature order."""
    _require_compatible(a, b)
    if (b.n, b.v) < (a.n, a.v):
        a, b = b, a  # canonical order makes symmetry in (a, b) exact
    return a.norm * b.norm * _raw_overlap(
        a.system, a.n, a.v, a.lam, b.n, b.v, b.lam, order
    )


def inner_product(a: OscillatorState, b: OscillatorState, order: int = DEFAULT_QUAD_ORDER) -> float:
    """<a|b> with an order-doubling convergence check.

    Evaluates the overlap at ``order`` and ``2 * order`` and raises
    `QuadratureAccuracyError` if they differ by more than 1e-9; returns the
    doubled-order value.
    """
    coarse = weighted_overlap(a, b, order)
    fine = weighted_overlap(a, b, 2 * order)
    if abs(fine - coarse) > 1e-9:
        raise QuadratureAccuracyError(
            f"overlap changed by {abs(fine - coarse):.3e} on order doubling"
        )
    return fine


def reference_norm(state: OscillatorState) -> float:
    """Closed-form normalization constant of the unit-weight polynomial integral.

    sqrt(n! (n + lam) Gamma(lam)^2 / (2^(1 - 2 lam) pi Gamma(2 lam + n))).
    Kept for comparison: the measured norm differs from this by a factor that
    is constant in n for a fixed system.
    """
    n, lam = state.n, state.lam
    log_val = (
        specfun.ln_gamma(n + 1.0)
        + math.log(n + lam)
        + 2.0 * specfun.ln_gamma(lam)
        - (1.0 - 2.0 * lam) * math.log(2.0)
        - math.log(math.pi)
        - specfun.ln_gamma(2.0 * lam + n)
    )
    return math.exp(0.5 * log_val)


def ladder_coeffs(n: int, lam: float) -> LadderCoefficients:
    """l- = sqrt(n (2 lam + n - 1)), l+ = sqrt((n+1) (2 lam + n)), l0 = lam + n."""
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    return LadderCoefficients(
        l_minus=math.sqrt(n * (2.0 * lam + n - 1.0)),
        l_plus=math.sqrt((n + 1.0) * (2.0 * lam + n)),
        l_zero=lam + n,
    )


def apply_ladder(
    state: OscillatorState,
    direction: str,
    rho: float,
    literal_raise: bool = False,
) -> float:
    """Evaluate the raising or lowering operator on the state at rho.

    lower: [ (1 - rho^2) d/drho + (2v + n) rho ] sqrt((lam + n - 1)/(n + lam))
    raise: [ -(1 - rho^2) d/drho + (2 lam - 2v + n) rho ] sqrt((lam + n + 1)/(n + lam))

    Derivatives are analytic (Gegenbauer derivative plus product rule).  On
    the nonrelativistic branch, where (v, lam) do not depend on n, the result
    equals l_(+/-) times the neighbouring normalized state pointwise; on the
    relativistic branch neighbouring states carry different exponents and no
    such identity holds.  With ``literal_raise`` the diagonal term of the
    raising operator is taken as a constant instead of proportional to rho;
    that variant fails the ladder identity and is kept only for documentation
    of the difference.
    """
    if not -1.0 < rho < 1.0:
        raise ValueError("rho must lie in (-1, 1)")
    n, v, lam = state.n, state.v, state.lam
    if direction == "lower":
        if n == 0:
            return 0.0  # annihilated: l-(0) = 0
        omr2 = 1.0 - rho * rho
        bracket = omr2 * eval_state_derivative(state, rho) + (2.0 * v + n) * rho * eval_state(state, rho)
        return bracket * math.sqrt((lam + n - 1.0) / (n + lam))
    if direction == "raise":
        omr2 = 1.0 - rho * rho
        diag = (2.0 * lam - 2.0 * v + n) * (1.0 if literal_raise else rho)
        bracket = -omr2 * eval_state_derivative(state, rho) + diag * eval_state(state, rho)
        return bracket * math.sqrt((lam + n + 1.0) / (n + lam))
    raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")


@dataclass(frozen=True)
class Su11Report:
    """Maximum absolute deviations of the coefficient-level algebra checks."""

    lam: float
    n_max: int
    commutator: float
    weight_shift: float
    casimir: float
    casimir_commutant: float

    @property
    def max_deviation(self) -> float:
        return max(self.commutator, self.weight_shift, self.casimir, self.casimir_commutant)


def su11_check(lam: float, n_max: int) -> Su11Report:
    """Verify the su(1,1) relations on the ladder coefficients for n <= n_max.

    [L-, L+] eigenvalue 2 (lam + n); [L0, L+-] shifts the l0 weight by +-1;
    Casimir eigenvalue l0 (l0 - 1) - l+ l- equals lam (lam - 1) for every n
    and therefore commutes with the ladder operators.
    """
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    casimir_target = lam * (lam - 1.0)
    dev_comm = dev_weight = dev_cas = dev_cc = 0.0
    casimir_prev = None
    for n in range(n_max + 1):
        c = ladder_coeffs(n, lam)
        up = ladder_coeffs(n + 1, lam)
        # [L-, L+] phi_n = (l+(n) l-(n+1) - l-(n) l+(n-1)) phi_n = 2 l0 phi_n
        comm = c.l_plus * up.l_minus
        if n > 0:
            down = ladder_coeffs(n - 1, lam)
            comm -= c.l_minus * down.l_plus
        dev_comm = max(dev_comm, abs(comm - 2.0 * c.l_zero))
        # [L0, L+] phi_n = l+(n) (l0(n+1) - l0(n)) phi_{n+1} = +L+ phi_n
        dev_weight = max(dev_weight, abs(c.l_plus * (up.l_zero - c.l_zero) - c.l_plus))
        if n > 0:
            down = ladder_coeffs(n - 1, lam)
            dev_weight = max(dev_weight, abs(c.l_minus * (down.l_zero - c.l_zero) + c.l_minus))
        # Casimir: l0 (l0 - 1) - l+(n-1) l-(n), with the lowering product vanishing at n = 0
        lowering = down.l_plus * c.l_minus if n > 0 else 0.0
        casimir = c.l_zero * (c.l_zero - 1.0) - lowering
        dev_cas = max(dev_cas, abs(casimir - casimir_target))
        if casimir_prev is not None:
            # [C, L+-] = 0 on eigenvalues: the Casimir value cannot depend on n
            dev_cc = max(dev_cc, abs((casimir - casimir_prev) * c.l_plus))
            dev_cc = max(dev_cc, abs((casimir - casimir_prev) * c.l_minus))
        casimir_prev = casimir
    return Su11Report(
        lam=lam,
        n_max=n_max,
        commutator=dev_comm,
        weight_shift=dev_weight,
        casimir=dev_cas,
        casimir_commutant=dev_cc,
    )
