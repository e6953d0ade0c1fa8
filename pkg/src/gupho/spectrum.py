"""Relativistic and nonrelativistic energy spectra of the deformed oscillator.

The relativistic levels solve an implicit quantization condition; it is
written here as a fixed-point map for the energy above rest mass,

    delta = (hbar omega m / 2) [ (2n+1) sqrt(hbar^2 eta^2 omega^2 / 4
            + 2 / (m (delta + 2m))) + hbar eta omega (n^2 + n + 1/2) ],

which at eta = 0 reduces smoothly to the undeformed limit, so both branches
share one solver.  Working in delta = E - m keeps the condition well
conditioned even for rest masses of 1e6 and deformations down to 1e-12.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .gup import DeformedAlgebra, OscillatorSystem

__all__ = [
    "SpectrumResult",
    "SolverError",
    "rel_residual",
    "energy_relativistic",
    "energy_nonrel",
    "nr_limit_of_relativistic",
    "ratio_sweep",
    "BOHR_RADIUS",
]

# Bohr-radius unit for the ratio sweep, pinned to 1 in natural units.
BOHR_RADIUS = 1.0

_MAX_ITER = 200
_DAMPING = 0.5
# relative tolerance on the fixed-point displacement (energy units)
_RTOL = 1e-14
# acceptance gate when iteration can no longer improve
_GATE = 1e-12


class SolverError(RuntimeError):
    """Energy solve failed to converge; message carries bracket diagnostics."""


@dataclass(frozen=True)
class SpectrumResult:
    """One converged level.

    ``residual`` is the quantization condition in its fixed-point (energy
    units) arrangement, delta - map(delta), evaluated at the returned energy;
    the dimensionless arrangement is available as `rel_residual`.
    """

    n: int
    energy: float
    residual: float
    iterations: int
    method: str  # "fixed_point" | "bisection" | "closed_form"


def rel_residual(system: OscillatorSystem, n: int, energy: float) -> float:
    """Dimensionless quantization condition at a trial relativistic energy.

    2 (E - m) / (hbar^2 eta m omega^2)
      - (2n+1) sqrt(1/4 + 2 / (hbar^2 eta^2 m omega^2 (E + m)))
      - 1/4 - (1/2 + n)^2.

    Strictly increasing in E above the rest mass, so it has a single root.
    """
    alg = system.algebra
    alg._require_deformed()
    m = system.mass
    if not energy + m > 0.0:
        raise ValueError("requires energy + mass > 0")
    hw2 = alg.hbar**2 * m * system.omega**2
    root = math.sqrt(0.25 + 2.0 / (hw2 * alg.eta**2 * (energy + m)))
    return 2.0 * (energy - m) / (hw2 * alg.eta) - (2 * n + 1) * root - 0.25 - (0.5 + n) ** 2


def _map_delta(system: OscillatorSystem, n: int, delta: float) -> float:
    """Fixed-point image of delta = E - m; valid for eta >= 0."""
    m = system.mass
    alg = system.algebra
    hw = alg.hbar * system.omega
    root = math.sqrt((hw * alg.eta) ** 2 / 4.0 + 2.0 / (m * (delta + 2.0 * m)))
    return 0.5 * hw * m * ((2 * n + 1) * root + hw * alg.eta * (n * n + n + 0.5))


def _displacement(system: OscillatorSystem, n: int, delta: float) -> float:
    return delta - _map_delta(system, n, delta)


def _solve_fixed_point(system: OscillatorSystem, n: int) -> tuple[float, float, int]:
    delta = system.algebra.hbar * system.omega * (n + 0.5)  # undeformed seed
    for it in range(1, _MAX_ITER + 1):
        disp = _displacement(system, n, delta)
        if abs(disp) <= _RTOL * max(1.0, abs(delta)):
            return delta, disp, it
        delta -= _DAMPING * disp
        if not math.isfinite(delta) or delta <= -2.0 * system.mass:
            raise SolverError(f"fixed-point iterate left the physical domain at n={n}")
    disp = _displacement(system, n, delta)
    if abs(disp) <= _GATE * max(1.0, abs(delta)):
        return delta, disp, _MAX_ITER
    raise SolverError(
        f"fixed-point iteration stalled after {_MAX_ITER} iterations at n={n}: "
        f"delta={delta!r}, displacement={disp!r}"
    )


def _solve_bisection(system: OscillatorSystem, n: int) -> tuple[float, float, int]:
    m = system.mass
    alg = system.algebra
    hw = alg.hbar * system.omega
    lo = 1e-12 * m
    hi = 10.0 * hw * (2 * n + 1) * (1.0 + hw * alg.eta * m * (n * n + n + 1.0))
    f_lo = _displacement(system, n, lo)
    f_hi = _displacement(system, n, hi)
    if f_lo > 0.0:
        raise SolverError(f"bisection bracket invalid at n={n}: f({lo!r}) = {f_lo!r} > 0")
    doublings = 0
    while f_hi < 0.0 and doublings < 60:
        hi *= 2.0
        f_hi = _displacement(system, n, hi)
        doublings += 1
    if f_hi < 0.0:
        raise SolverError(
            f"no sign change up to delta={hi!r} after {doublings} doublings at n={n}"
        )
    best = hi
    best_disp = f_hi
    for it in range(1, _MAX_ITER + 1):
        mid = 0.5 * (lo + hi)
        disp = _displacement(system, n, mid)
        if abs(disp) < abs(best_disp):
            best, best_disp = mid, disp
        if abs(disp) <= _RTOL * max(1.0, abs(mid)):
            return mid, disp, it
        if disp < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4.0 * math.ulp(hi):
            break
    if abs(best_disp) <= _GATE * max(1.0, abs(best)):
        return best, best_disp, it
    raise SolverError(
        f"bisection failed at n={n}: bracket=({lo!r}, {hi!r}), displacement={best_disp!r}"
    )


def energy_relativistic(system: OscillatorSystem, n: int, method: str = "auto") -> SpectrumResult:
    """Relativistic level E_R > m for quantum number n.

    ``method`` selects damped fixed-point iteration ("fixed_point"), bisection
    on the displacement ("bisection"), or iteration with automatic bisection
    fallback ("auto").  The two methods agree to 1e-10 relative; both handle
    eta = 0 through the smooth limit of the fixed-point map.
    """
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    if method in ("auto", "fixed_point"):
        try:
            delta, disp, iters = _solve_fixed_point(system, n)
            used = "fixed_point"
        except SolverError:
            if method == "fixed_point":
                raise
            delta, disp, iters = _solve_bisection(system, n)
            used = "bisection"
    elif method == "bisection":
        delta, disp, iters = _solve_bisection(system, n)
        used = "bisection"
    else:
        raise ValueError(f"unknown method {method!r}")
    return SpectrumResult(
        n=n, energy=system.mass + delta, residual=disp, iterations=iters, method=used
    )


def energy_nonrel(system: OscillatorSystem, n: int) -> SpectrumResult:
    """Closed-form nonrelativistic level.

    E_n = hbar omega [ (1/2 + n + n^2) hbar mu eta omega / 2
                       + (n + 1/2) sqrt(hbar^2 eta^2 mu^2 omega^2 / 4 + 1) ],

    which is hbar omega (n + 1/2) at eta = 0 and grows like (n + 1)^2 for
    large deformation.
    """
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    alg = system.algebra
    half = 0.5 * alg.hbar * alg.eta * system.mass * system.omega
    energy = alg.hbar * system.omega * (
        (0.5 + n + n * n) * half + (n + 0.5) * math.sqrt(half * half + 1.0)
    )
    return SpectrumResult(n=n, energy=energy, residual=0.0, iterations=0, method="closed_form")


def nr_limit_of_relativistic(system: OscillatorSystem, n: int) -> float:
    """E_R - m from the relativistic solver, for comparison with `energy_nonrel`.

    Meaningful when the rest energy dominates; warns if mass < 1e3 hbar omega.
    The comparison keeps eta fixed across the limit and degrades once
    hbar eta omega m approaches 1.
    """
    alg = system.algebra
    if system.mass < 1e3 * alg.hbar * system.omega:
        warnings.warn(
            "mass is not large compared to hbar*omega; the nonrelativistic "
            "limit will be inaccurate",
            stacklevel=2,
        )
    result = energy_relativistic(system, n)
    return result.energy - system.mass


def ratio_sweep(
    mass: float,
    omega: float,
    hbar: float,
    gamma: float,
    n_values: list[int],
    xi_grid: list[float],
) -> list[tuple[float, int, float, float, float]]:
    """Level-to-ground-state ratios versus minimal length xi = hbar sqrt(eta) / a0.

    Uses the nonrelativistic spectrum with the Bohr-radius unit a0 = 1, so
    eta = (xi a0 / hbar)^2.  Emits one row (xi, n, E_n, E_0, E_n/E_0) per
    (xi, n) pair; at xi = 0 the ratio column is exactly 2n + 1, and for large
    xi it approaches (n + 1)^2.
    """
    rows = []
    for xi in xi_grid:
        if xi < 0.0:
            raise ValueError("xi values must be nonnegative")
        eta = (xi * BOHR_RADIUS / hbar) ** 2
        system = OscillatorSystem(mass, omega, DeformedAlgebra(eta=eta, gamma=gamma, hbar=hbar))
        e0 = energy_nonrel(system, 0).energy
        for n in n_values:
            en = energy_nonrel(system, n).energy
            rows.append((float(xi), int(n), en, e0, en / e0))
    return rows
