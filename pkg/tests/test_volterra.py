import math

import numpy as np
import pytest

from _helpers import d1_fd4, d2_fd4, linf
from nml import kernels, volterra
from nml.errors import InstabilityError, ParameterError


class TestConfig:
    def test_rejects_bad_steps(self):
        with pytest.raises(ParameterError):
            volterra.SolverConfig(dt=0.0, t_max=1.0)
        with pytest.raises(ParameterError):
            volterra.SolverConfig(dt=1.0, t_max=0.5)

    def test_resource_guard(self):
        with pytest.raises(ParameterError):
            volterra.SolverConfig(dt=1e-9, t_max=1e3)


class TestClosedForm:
    def test_initial_value(self):
        assert volterra.lorentzian_closed_form(1.0, 0.1, 0.0) == 1.0

    def test_negative_time_rejected(self):
        with pytest.raises(ParameterError):
            volterra.lorentzian_closed_form(1.0, 0.1, -1.0)

    def test_first_zero_matches_formula(self):
        # t_hat = (2/D)(pi - arctan(D/lambda)) with D = sqrt(2 g l - l^2)
        d = math.sqrt(2 * 1.0 * 0.1 - 0.1 ** 2)
        t_hat = (2.0 / d) * (math.pi - math.atan(d / 0.1))
        assert t_hat == pytest.approx(8.2421, abs=2e-4)
        val = volterra.lorentzian_closed_form(1.0, 0.1, t_hat)
        assert abs(val) < 1e-12

    def test_real_in_both_branches(self):
        ts = np.linspace(0.0, 50.0, 301)
        for gamma in (1.0, 0.04):
            vals = volterra.lorentzian_closed_form(gamma, 0.1, ts)
            assert np.all(vals.imag == 0.0)

    def test_weak_coupling_stays_positive(self):
        # gamma < lambda/2: hyperbolic branch, unidirectional decay
        ts = np.linspace(0.0, 100.0, 10001)
        vals = volterra.lorentzian_closed_form(0.04, 0.1, ts).real
        assert np.all(vals > 0)

    def test_degenerate_point_analytic_limit(self):
        # 2*gamma*lambda == lambda^2  <=>  gamma = lambda/2
        val = volterra.lorentzian_closed_form(0.05, 0.1, 7.0)
        expected = math.exp(-0.05 * 7.0 / 1.0) * (1 + 0.05 * 7.0 / 1.0)
        assert val.real == pytest.approx(
            math.exp(-0.35) * (1 + 0.35), rel=1e-14)

    def test_branch_continuity(self):
        # continuous in gamma across 2*gamma*lambda = lambda^2
        lam = 0.1
        g_crit = lam / 2.0
        for t in (1.0, 5.0, 20.0):
            below = volterra.lorentzian_closed_form(g_crit - 1e-8, lam, t)
            at = volterra.lorentzian_closed_form(g_crit, lam, t)
            above = volterra.lorentzian_closed_form(g_crit + 1e-8, lam, t)
            assert abs(below - at) < 1e-6
            assert abs(above - at) < 1e-6

    def test_satisfies_amplitude_ode(self):
        # C'' + lambda C' + (gamma lambda / 2) C = 0 under numerical
        # differentiation
        gamma, lam = 1.0, 0.1

        def c(t):
            return volterra.lorentzian_closed_form(gamma, lam, t).real

        for t in np.linspace(0.5, 25.0, 40):
            res = (d2_fd4(c, t) + lam * d1_fd4(c, t, h=1e-2)
                   + 0.5 * gamma * lam * c(t))
            assert abs(res) < 1e-9

    def test_derivative_helper_consistent(self):
        gamma, lam = 1.0, 0.1

        def c(t):
            return volterra.lorentzian_closed_form(gamma, lam, t).real

        for t in (0.5, 3.0, 11.0):
            ana = volterra.lorentzian_closed_form_derivative(gamma, lam, t)
            assert ana.real == pytest.approx(d1_fd4(c, t, h=1e-3), abs=1e-10)


class TestSolver:
    def test_initial_conditions_exact(self, exact_lorentzian_30):
        assert exact_lorentzian_30.c[0] == 1.0
        assert exact_lorentzian_30.c_dot[0] == 0.0

    def test_matches_closed_form(self, exact_lorentzian_30):
        cf = volterra.lorentzian_closed_form(
            1.0, 0.1, exact_lorentzian_30.times)
        assert linf(exact_lorentzian_30.c, cf) < 1e-6

    def test_second_order_convergence(self):
        kern = kernels.make_kernel("lorentzian", 1.0, 0.1)
        errs = []
        for dt in (2e-3, 1e-3):
            traj = volterra.solve_exact(
                kern, volterra.SolverConfig(dt=dt, t_max=10.0))
            cf = volterra.lorentzian_closed_form(1.0, 0.1, traj.times)
            errs.append(linf(traj.c, cf))
        assert 3.5 <= errs[0] / errs[1] <= 4.5

    def test_weak_coupling_monotone(self):
        # gamma < lambda/2: real, strictly positive, nonincreasing
        kern = kernels.make_kernel("lorentzian", 1.0, 10.0)
        traj = volterra.solve_exact(
            kern, volterra.SolverConfig(dt=1e-3, t_max=2.0))
        re = traj.c.real
        assert np.all(traj.c.imag == 0.0)
        assert np.all(re > 0)
        assert np.all(np.diff(re) <= 0)

    @pytest.mark.parametrize("kind", kernels.KERNEL_KINDS)
    def test_scale_invariance_bitwise(self, kind):
        # (gamma, lambda, dt, t_max) -> (2 gamma, 2 lambda, dt/2, t_max/2)
        # maps grids point-to-point with identical samples
        a = volterra.solve_exact(kernels.make_kernel(kind, 1.0, 0.1),
                                 volterra.SolverConfig(dt=2e-3, t_max=4.0))
        b = volterra.solve_exact(kernels.make_kernel(kind, 2.0, 0.2),
                                 volterra.SolverConfig(dt=1e-3, t_max=2.0))
        assert np.array_equal(a.c, b.c)

    def test_deterministic(self):
        kern = kernels.make_kernel("gaussian", 1.0, 0.1)
        cfg = volterra.SolverConfig(dt=1e-3, t_max=2.0)
        a = volterra.solve_exact(kern, cfg)
        b = volterra.solve_exact(kern, cfg)
        assert np.array_equal(a.c, b.c)
        assert np.array_equal(a.c_dot, b.c_dot)

    def test_instability_raises(self):
        kern = kernels.make_kernel("lorentzian", 10.0, 10.0)
        with pytest.raises(InstabilityError):
            volterra.solve_exact(kern, volterra.SolverConfig(dt=1.0, t_max=50.0))

    def test_refine_check_passes_on_sane_step(self):
        kern = kernels.make_kernel("lorentzian", 1.0, 0.1)
        traj = volterra.solve_exact(
            kern, volterra.SolverConfig(dt=1e-2, t_max=2.0, refine_check=True))
        assert len(traj.c) == 201

    def test_trajectory_immutable(self, exact_lorentzian_30):
        with pytest.raises(ValueError):
            exact_lorentzian_30.c[0] = 5.0

    def test_amplitude_within_physical_bound(self, exact_lorentzian_30):
        assert np.max(np.abs(exact_lorentzian_30.c)) <= 1.0 + volterra.EPS_PHYS
