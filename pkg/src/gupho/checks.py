"""Invariant verification suite backing the `verify` command.

Each check returns its maximum observed deviation together with the pinned
tolerance; the suite passes when every deviation is within tolerance.  With
eta = 0 the deformed-only checks are skipped and the undeformed limit checks
run instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .gup import (
    DeformedAlgebra,
    OscillatorSystem,
    fm_problem_of,
    ode_residual,
    rho_of_p,
    tilde_params,
    v_exponent,
)
from .fm import fm_exponents, fm_quantization_residual
from .spectrum import energy_nonrel, energy_relativistic, rel_residual
from .states import (
    NONRELATIVISTIC,
    RELATIVISTIC,
    apply_ladder,
    eval_state,
    ladder_coeffs,
    make_state,
    reference_norm,
    su11_check,
    weighted_overlap,
)

__all__ = ["CheckResult", "run_suite"]

_ETA_GRID = (0.01, 0.1, 1.0)
_SU11_LAMBDAS = (0.8, 1.61803, 3.2)


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def _system(mass, omega, hbar, eta, gamma) -> OscillatorSystem:
    return OscillatorSystem(mass, omega, DeformedAlgebra(eta=eta, gamma=gamma, hbar=hbar))


def _check_solver_cross_validation(mass, omega, hbar, gamma, etas, n_top) -> CheckResult:
    dev = 0.0
    for eta in etas:
        system = _system(mass, omega, hbar, eta, gamma)
        for n in range(n_top + 1):
            fp = energy_relativistic(system, n, method="fixed_point")
            bi = energy_relativistic(system, n, method="bisection")
            dev = max(dev, abs(fp.energy - bi.energy) / abs(fp.energy))
    return CheckResult("solver_cross_validation", dev, 1e-10)


def _check_relativistic_residual(mass, omega, hbar, gamma, etas, n_top) -> CheckResult:
    dev = 0.0
    for eta in etas:
        system = _system(mass, omega, hbar, eta, gamma)
        for n in range(n_top + 1):
            res = energy_relativistic(system, n)
            dev = max(dev, abs(rel_residual(system, n, res.energy)))
    return CheckResult("relativistic_residual", dev, 1e-10)


def _check_nr_limit(omega, hbar, gamma) -> CheckResult:
    system = _system(1e6, omega, hbar, 0.0, gamma)
    dev = 0.0
    for n in range(6):
        gap = energy_relativistic(system, n).energy - system.mass
        target = hbar * omega * (n + 0.5)
        dev = max(dev, abs(gap - target) / target)
    return CheckResult("nr_limit", dev, 1e-5)


def _check_gamma_invariance(mass, omega, hbar, eta, n_top) -> CheckResult:
    dev = 0.0
    reference = [
        energy_relativistic(_system(mass, omega, hbar, eta, 0.0), n).energy
        for n in range(n_top + 1)
    ]
    for gamma in (eta / 2.0, eta, 2.0 * eta):
        system = _system(mass, omega, hbar, eta, gamma)
        for n in range(n_top + 1):
            e = energy_relativistic(system, n).energy
            dev = max(dev, abs(e - reference[n]) / abs(reference[n]))
    return CheckResult("gamma_invariance", dev, 1e-10)


def _check_fm_exponent_consistency(mass, omega, hbar) -> CheckResult:
    dev = 0.0
    for eta in _ETA_GRID:
        for gamma in (0.0, eta / 2.0, eta):
            system = _system(mass, omega, hbar, eta, gamma)
            for energy in (1.1 * mass, 2.0 * mass):
                v = v_exponent(system, energy)
                k4, k5 = fm_exponents(fm_problem_of(system, energy))
                dev = max(dev, abs(k4 - v), abs(k5 - v))
    return CheckResult("fm_exponent_consistency", dev, 1e-11)


def _check_fm_quantization_zero(mass, omega, hbar, gamma, n_top) -> CheckResult:
    dev = 0.0
    for eta in _ETA_GRID:
        system = _system(mass, omega, hbar, eta, gamma)
        for n in range(n_top + 1):
            energy = energy_relativistic(system, n).energy
            dev = max(dev, abs(fm_quantization_residual(fm_problem_of(system, energy), n)))
    return CheckResult("fm_quantization_zero", dev, 1e-9)


def _check_orthonormality(states, order) -> CheckResult:
    dev = 0.0
    for i, a in enumerate(states):
        for b in states[: i + 1]:
            entry = weighted_overlap(a, b, order)
            target = 1.0 if a.n == b.n else 0.0
            dev = max(dev, abs(entry - target))
    return CheckResult("orthonormality", dev, 1e-10)


def _check_quadrature_doubling(states, order) -> CheckResult:
    dev = 0.0
    for i, a in enumerate(states):
        for b in states[: i + 1]:
            coarse = weighted_overlap(a, b, order)
            fine = weighted_overlap(a, b, 2 * order)
            dev = max(dev, abs(fine - coarse))
    return CheckResult("quadrature_doubling", dev, 1e-11)


def _check_normalization_reference(states) -> CheckResult:
    ratios = [s.norm / reference_norm(s) for s in states]
    dev = max(abs(r / ratios[0] - 1.0) for r in ratios)
    return CheckResult("normalization_reference", dev, 1e-9)


def _check_ladder_identity(states, literal_raise) -> CheckResult:
    rho_grid = np.linspace(-0.95, 0.95, 39)
    dev = 0.0
    for state in states:
        n = state.n
        coeffs = ladder_coeffs(n, state.lam)
        if n + 1 < len(states):
            target = coeffs.l_plus * eval_state(states[n + 1], rho_grid)
            got = np.array(
                [apply_ladder(state, "raise", r, literal_raise=literal_raise) for r in rho_grid]
            )
            dev = max(dev, np.max(np.abs(got - target)) / np.max(np.abs(target)))
        if n >= 1:
            target = coeffs.l_minus * eval_state(states[n - 1], rho_grid)
            got = np.array([apply_ladder(state, "lower", r) for r in rho_grid])
            dev = max(dev, np.max(np.abs(got - target)) / np.max(np.abs(target)))
    return CheckResult("ladder_identity", dev, 1e-8)


def _check_su11_algebra() -> list[CheckResult]:
    reports = [su11_check(lam, 20) for lam in _SU11_LAMBDAS]
    core = max(max(r.commutator, r.weight_shift, r.casimir) for r in reports)
    # the commutant product amplifies 1-ulp coefficient noise by ~l_plus(20)
    commutant = max(r.casimir_commutant for r in reports)
    return [
        CheckResult("su11_algebra", core, 1e-12),
        CheckResult("su11_casimir_commutant", commutant, 1e-10),
    ]


def _check_ode_residual(mass, omega, hbar, eta, gamma, n_top, order) -> CheckResult:
    system = _system(mass, omega, hbar, eta, gamma)
    p_grid = np.linspace(-5.0 / math.sqrt(eta), 5.0 / math.sqrt(eta), 101)
    dev = 0.0
    for n in range(n_top + 1):
        state = make_state(system, n, RELATIVISTIC, order=order)

        def evaluator(rho, _state=state):
            return eval_state(_state, rho)

        for p in p_grid:
            res = ode_residual(system, state.energy, evaluator, p)
            scale = _ode_scale(system, state, p)
            if scale > 0.0:
                dev = max(dev, abs(res) / scale)
    return CheckResult("ode_residual", dev, 1e-5)


def _ode_scale(system, state, p) -> float:
    """Sum of the magnitudes of the three equation terms at p."""
    alg = system.algebra
    h = 1e-5 * max(1.0, abs(p))

    def f(q):
        return eval_state(state, rho_of_p(alg, q))

    d1 = (f(p + h) - f(p - h)) / (2.0 * h)
    d2 = (f(p + h) - 2.0 * f(p) + f(p - h)) / (h * h)
    a_tilde, b_tilde = tilde_params(system, state.energy)
    w = 1.0 + alg.eta * p * p
    return (
        abs(d2)
        + abs(2.0 * (alg.gamma + alg.eta) * p / w * d1)
        + abs((b_tilde + p * p * a_tilde) / (w * w) * f(p))
    )


def _check_weight_orthogonality(order) -> CheckResult:
    nodes, weights, omx2 = specfun.sine_mapped_rule(order)
    dev = 0.0
    for t in (0.75, 1.0, 2.5):
        polys = [specfun.gegenbauer(n, t, nodes) for n in range(9)]
        for n in range(9):
            for m in range(n + 1):
                got = specfun.symmetric_dot(weights, omx2 ** (t - 0.5) * polys[n] * polys[m])
                if n == m:
                    target = math.exp(
                        math.log(math.pi)
                        + (1.0 - 2.0 * t) * math.log(2.0)
                        + specfun.ln_gamma(2.0 * t + n)
                        - specfun.ln_gamma(n + 1.0)
                        - 2.0 * specfun.ln_gamma(t)
                    ) / (n + t)
                else:
                    target = 0.0
                dev = max(dev, abs(got - target))
    return CheckResult("weight_orthogonality", dev, 1e-10)


def _check_undeformed_continuity(mass, omega, hbar, gamma) -> CheckResult:
    flat = _system(mass, omega, hbar, 0.0, gamma)
    tiny = _system(mass, omega, hbar, 1e-12, gamma)
    dev = 0.0
    for n in range(4):
        e0 = energy_relativistic(flat, n).energy
        e1 = energy_relativistic(tiny, n).energy
        dev = max(dev, abs(e1 - e0) / e0)
    return CheckResult("undeformed_continuity", dev, 1e-9)


def _check_undeformed_closed_form(mass, omega, hbar, gamma) -> CheckResult:
    system = _system(mass, omega, hbar, 0.0, gamma)
    dev = 0.0
    for n in range(11):
        dev = max(dev, abs(energy_nonrel(system, n).energy - hbar * omega * (n + 0.5)))
    return CheckResult("undeformed_closed_form", dev, 1e-14)


def run_suite(
    mass: float = 1.0,
    omega: float = 1.0,
    hbar: float = 1.0,
    eta: float = 0.1,
    gamma: float = 0.0,
    n_max: int = 8,
    order: int = 200,
    literal_raise: bool = False,
) -> list[CheckResult]:
    """Run the invariant suite at the given parameters; returns one result per check."""
    n_top = min(n_max, 8)
    results = []
    if eta > 0.0:
        results.append(_check_solver_cross_validation(mass, omega, hbar, gamma, _ETA_GRID, n_top))
        results.append(_check_relativistic_residual(mass, omega, hbar, gamma, _ETA_GRID, n_top))
        results.append(_check_nr_limit(omega, hbar, gamma))
        results.append(_check_gamma_invariance(mass, omega, hbar, eta, n_top))
        results.append(_check_fm_exponent_consistency(mass, omega, hbar))
        results.append(_check_fm_quantization_zero(mass, omega, hbar, gamma, n_top))
        system = _system(mass, omega, hbar, eta, gamma)
        nr_states = [make_state(system, n, NONRELATIVISTIC, order=order) for n in range(n_top + 1)]
        results.append(_check_orthonormality(nr_states, order))
        results.append(_check_quadrature_doubling(nr_states, order))
        results.append(_check_normalization_reference(nr_states))
        results.append(_check_ladder_identity(nr_states, literal_raise))
        results.extend(_check_su11_algebra())
        results.append(_check_ode_residual(mass, omega, hbar, eta, gamma, n_top, order))
        results.append(_check_weight_orthogonality(order))
        results.append(_check_undeformed_continuity(mass, omega, hbar, gamma))
    else:
        results.append(_check_solver_cross_validation(mass, omega, hbar, gamma, (0.0,), n_top))
        results.append(_check_nr_limit(omega, hbar, gamma))
        results.extend(_check_su11_algebra())
        results.append(_check_undeformed_continuity(mass, omega, hbar, gamma))
        results.append(_check_undeformed_closed_form(mass, omega, hbar, gamma))
    return results
