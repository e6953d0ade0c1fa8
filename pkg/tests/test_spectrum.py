import math
import warnings

import mpmath as mp
import numpy as np
import pytest

from gupho.fm import fm_quantization_residual
from gupho.gup import DeformedAlgebra, OscillatorSystem, UndeformedBranchError, fm_problem_of
from gupho.spectrum import (
    energy_nonrel,
    energy_relativistic,
    nr_limit_of_relativistic,
    ratio_sweep,
    rel_residual,
)


def system(mass=1.0, omega=1.0, eta=0.1, gamma=0.0, hbar=1.0):
    return OscillatorSystem(mass, omega, DeformedAlgebra(eta=eta, gamma=gamma, hbar=hbar))


def high_precision_root(n, eta, mass=1, omega=1, hbar=1, dps=80):
    """Root of the dimensionless quantization condition by mpmath bisection."""
    with mp.workdps(dps):
        eta_mp = mp.mpf(eta)
        m = mp.mpf(mass)
        hw2 = mp.mpf(hbar) ** 2 * m * mp.mpf(omega) ** 2

        def condition(energy):
            root = mp.sqrt(mp.mpf(1) / 4 + 2 / (hw2 * eta_mp**2 * (energy + m)))
            return (
                2 * (energy - m) / (hw2 * eta_mp)
                - (2 * n + 1) * root
                - mp.mpf(1) / 4
                - (mp.mpf(1) / 2 + n) ** 2
            )

        lo, hi = m * (1 + mp.mpf(10) ** -12), m + 100 * (2 * n + 1) * (1 + eta_mp * m)
        assert condition(lo) < 0 < condition(hi)
        for _ in range(400):
            mid = (lo + hi) / 2
            if condition(mid) < 0:
                lo = mid
            else:
                hi = mid
        return float((lo + hi) / 2)


class TestRelResidual:
    def test_vanishes_at_converged_energy(self):
        sys = system(eta=0.1)
        for n in range(4):
            energy = energy_relativistic(sys, n).energy
            assert abs(rel_residual(sys, n, energy)) <= 1e-10

    def test_n_difference(self):
        # residual(n) - residual(n+1) = 2 sqrt(1/4 + 2/(eta^2 (E+m))) + 2n + 2
        sys = system(eta=0.1)
        for energy in (1.2, 1.6, 3.0):
            root = math.sqrt(0.25 + 2.0 / (0.1**2 * (energy + 1.0)))
            for n in range(5):
                diff = rel_residual(sys, n, energy) - rel_residual(sys, n + 1, energy)
                assert diff == pytest.approx(2.0 * root + 2 * n + 2, rel=1e-13)
                assert diff > 0

    def test_increasing_in_energy(self):
        sys = system(eta=0.5)
        values = [rel_residual(sys, 2, e) for e in np.linspace(1.001, 50.0, 200)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert values[-1] > 0  # dominates at large energy

    def test_undeformed_rejected(self):
        with pytest.raises(UndeformedBranchError):
            rel_residual(system(eta=0.0), 0, 1.5)


class TestEnergyRelativistic:
    def test_large_mass_undeformed(self):
        sys = system(mass=1e6, omega=1.0, eta=0.0)
        res = energy_relativistic(sys, 2)
        assert (res.energy - 1e6) == pytest.approx(2.5, rel=1e-5)

    def test_against_high_precision_oracle(self):
        sys = system(eta=0.1)
        res = energy_relativistic(sys, 0)
        oracle = high_precision_root(0, "0.1")
        assert res.energy == pytest.approx(oracle, abs=1e-12)

    @pytest.mark.parametrize("eta", [0.0, 0.01, 0.1, 1.0])
    def test_monotone_in_n(self, eta):
        sys = system(eta=eta)
        energies = [energy_relativistic(sys, n).energy for n in range(10)]
        assert all(b > a for a, b in zip(energies, energies[1:]))
        assert all(e > sys.mass for e in energies)

    def test_result_fields(self):
        res = energy_relativistic(system(eta=0.1), 3)
        assert res.n == 3
        assert res.method in ("fixed_point", "bisection")
        assert res.iterations >= 1
        assert abs(res.residual) <= 1e-10 * max(1.0, abs(res.energy))

    @pytest.mark.parametrize("eta", [0.01, 0.1, 1.0])
    @pytest.mark.parametrize("omega", [0.5, 1.0, 2.0])
    def test_methods_agree(self, eta, omega):
        sys = system(omega=omega, eta=eta)
        for n in (0, 1, 3, 5, 8):
            fp = energy_relativistic(sys, n, method="fixed_point")
            bi = energy_relativistic(sys, n, method="bisection")
            assert fp.method == "fixed_point"
            assert bi.method == "bisection"
            assert abs(fp.energy - bi.energy) <= 1e-10 * abs(fp.energy)

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError):
            energy_relativistic(system(), 0, method="newton")

    def test_negative_n_rejected(self):
        with pytest.raises(ValueError):
            energy_relativistic(system(), -1)


class TestEnergyNonrel:
    def test_undeformed_is_half_integer(self):
        sys = system(eta=0.0)
        for n in range(11):
            res = energy_nonrel(sys, n)
            assert res.energy == n + 0.5
            assert res.residual == 0.0
            assert res.method == "closed_form"

    def test_direct_evaluation(self):
        got = energy_nonrel(system(eta=0.1), 0).energy
        assert got == pytest.approx(0.5 * 0.05 + 0.5 * math.sqrt(1.0 + 0.0025), rel=1e-15)

    def test_large_deformation_ratio(self):
        sys = system(eta=1e9)
        e0 = energy_nonrel(sys, 0).energy
        for n in range(1, 6):
            ratio = energy_nonrel(sys, n).energy / e0
            assert ratio == pytest.approx((n + 1) ** 2, rel=1e-8)

    def test_gamma_never_enters(self):
        for gamma in (0.0, 0.3, -0.2):
            assert energy_nonrel(system(eta=0.2, gamma=gamma), 4).energy == energy_nonrel(
                system(eta=0.2, gamma=0.0), 4
            ).energy


class TestNrLimit:
    def test_undeformed_match(self):
        sys = system(mass=1e6, omega=1.0, eta=0.0)
        nr = system(mass=1e6, omega=1.0, eta=0.0)
        for n in range(6):
            gap = nr_limit_of_relativistic(sys, n)
            assert gap == pytest.approx(energy_nonrel(nr, n).energy, rel=1e-5)

    def test_small_deformation_match(self):
        sys = system(mass=1e6, omega=1.0, eta=1e-6)
        for n in range(4):
            gap = nr_limit_of_relativistic(sys, n)
            target = energy_nonrel(sys, n).energy
            assert gap == pytest.approx(target, rel=1e-3)

    def test_ground_state_positive(self):
        assert nr_limit_of_relativistic(system(mass=1e6, eta=0.0), 0) > 0

    def test_warns_for_light_mass(self):
        with pytest.warns(UserWarning):
            nr_limit_of_relativistic(system(mass=1.0, eta=0.1), 0)

    def test_no_warning_for_heavy_mass(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            nr_limit_of_relativistic(system(mass=1e6, eta=0.0), 0)


class TestRatioSweep:
    def test_zero_xi_anchors(self):
        rows = ratio_sweep(1.0, math.pi, 1.0, 0.0, [1, 2, 3], [0.0])
        ratios = {row[1]: row[4] for row in rows}
        assert ratios == {1: 3.0, 2: 5.0, 3: 7.0}

    def test_large_xi_ratio(self):
        rows = ratio_sweep(1.0, math.pi, 1.0, 0.0, [3], [50.0])
        assert rows[0][4] == pytest.approx(16.0, rel=0.01)

    def test_monotone_in_xi(self):
        xi_grid = list(np.linspace(0.0, 5.0, 101))
        rows = ratio_sweep(1.0, math.pi, 1.0, 0.0, [1, 2, 3], xi_grid)
        for n in (1, 2, 3):
            ratios = [row[4] for row in rows if row[1] == n]
            assert all(b >= a for a, b in zip(ratios, ratios[1:]))

    def test_row_structure(self):
        rows = ratio_sweep(1.0, 1.0, 1.0, 0.0, [0, 2], [0.0, 1.0])
        assert len(rows) == 4
        assert [r[:2] for r in rows] == [(0.0, 0), (0.0, 2), (1.0, 0), (1.0, 2)]
        for xi, n, en, e0, ratio in rows:
            assert ratio == en / e0

    def test_negative_xi_rejected(self):
        with pytest.raises(ValueError):
            ratio_sweep(1.0, 1.0, 1.0, 0.0, [1], [-1.0])


class TestCrossContracts:
    @pytest.mark.parametrize("eta", [0.01, 0.1, 1.0])
    def test_gamma_invariance(self, eta):
        reference = [energy_relativistic(system(eta=eta, gamma=0.0), n).energy for n in range(9)]
        for gamma in (eta / 2, eta, 2 * eta):
            sys = system(eta=eta, gamma=gamma)
            for n in range(9):
                energy = energy_relativistic(sys, n).energy
                assert energy == pytest.approx(reference[n], rel=1e-10)

    @pytest.mark.parametrize("eta", [0.01, 0.1, 1.0])
    def test_solver_root_zeroes_fm_residual(self, eta):
        sys = system(eta=eta)
        for n in range(9):
            energy = energy_relativistic(sys, n).energy
            problem = fm_problem_of(sys, energy)
            assert abs(fm_quantization_residual(problem, n)) <= 1e-9

    def test_undeformed_limit_continuity(self):
        for n in range(4):
            flat = energy_relativistic(system(eta=0.0), n).energy
            tiny = energy_relativistic(system(eta=1e-12), n).energy
            assert abs(tiny - flat) <= 1e-9 * flat
