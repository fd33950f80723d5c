import math

import numpy as np
import pytest

from _helpers import d1_fd4, d1_forward4, linf
from nml import kernels, multiscale as ms, volterra
from nml.errors import (GrowingEnvelopeError, ParameterError,
                        SingularityError, UnsupportedKernelError)

GAMMA, LAMBDA = 1.0, 0.1
ALPHA = math.sqrt(LAMBDA / GAMMA)


@pytest.fixture(scope="module")
def lorentzian_coeffs():
    k = kernels.make_kernel("lorentzian", GAMMA, LAMBDA)
    return ms.derive_ms_coefficients(
        kernels.taylor_coefficients(k, 4), GAMMA, LAMBDA)


@pytest.fixture(scope="module")
def gaussian_coeffs():
    k = kernels.make_kernel("gaussian", GAMMA, LAMBDA)
    return ms.derive_ms_coefficients(
        kernels.taylor_coefficients(k, 4), GAMMA, LAMBDA)


def gamma_ms0_closed(g, lam, t):
    """Dissipator of the leading-order solution, closed form."""
    return lam + math.sqrt(2 * g * lam) * math.tan(math.sqrt(2 * g * lam) / 2 * t)


def gamma_ms1_closed(g, lam, t):
    """Dissipator of the first-order solution, closed form."""
    root = math.sqrt(2 * g * lam)
    u = math.tan(root / 2 * (1 - lam / (4 * g)) * t)
    return ((lam ** 2 + (4 * g + lam) * root * u)
            / (4 * g + 2 * root * u))


class TestDerivation:
    def test_exponential_kernel_identities(self, lorentzian_coeffs):
        co = lorentzian_coeffs
        # the generic coefficient formulas must collapse to the known
        # exponential-kernel values without any rounding slack
        assert co.a1_over_a0 == -0.25
        assert co.b1_over_b0 == 0.0
        assert co.c1 == 1.0 / math.sqrt(2.0)
        assert co.omega0 == pytest.approx(math.sqrt(GAMMA * LAMBDA / 2), rel=1e-15)
        assert co.decay == pytest.approx(-LAMBDA / 2, rel=1e-15)
        assert not co.collapsed_tau

    def test_symmetric_kernel_collapses(self, gaussian_coeffs):
        co = gaussian_coeffs
        assert co.collapsed_tau
        assert co.decay == 0.0
        assert co.b1_over_b0 is None
        assert co.c1 == 0.0
        assert co.a1_over_a0 == 2.0  # -G_2/G_0^2 with G_2 = -1/2

    @pytest.mark.parametrize("kind,a1,b1", [
        ("gaussian-error", 0.75, math.pi - 2.0),
        ("inverse-law", -1.25, -6.0),
    ])
    def test_other_kernels(self, kind, a1, b1):
        k = kernels.make_kernel(kind, GAMMA, LAMBDA)
        co = ms.derive_ms_coefficients(
            kernels.taylor_coefficients(k, 4), GAMMA, LAMBDA)
        assert co.a1_over_a0 == pytest.approx(a1, rel=1e-14)
        assert co.b1_over_b0 == pytest.approx(b1, rel=1e-14)
        assert co.c1 == pytest.approx(1 / math.sqrt(2), rel=1e-14)

    def test_nonpositive_g0_rejected(self):
        tay = kernels.KernelTaylor((-0.5, -0.5, 0.25, -1 / 12), 4)
        with pytest.raises(UnsupportedKernelError):
            ms.derive_ms_coefficients(tay, 1.0, 0.1)

    def test_positive_g1_rejected(self):
        tay = kernels.KernelTaylor((0.5, 0.5, 0.25, -1 / 12), 4)
        with pytest.raises(GrowingEnvelopeError):
            ms.derive_ms_coefficients(tay, 1.0, 0.1)

    def test_order_too_low(self):
        with pytest.raises(ParameterError):
            ms.derive_ms_coefficients(
                kernels.KernelTaylor((0.5, -0.5, 0.25), 3), 1.0, 0.1)
        # symmetric kernels only need three coefficients
        co = ms.derive_ms_coefficients(
            kernels.KernelTaylor((0.5, 0.0, -0.5), 3), 1.0, 0.1)
        assert co.collapsed_tau

    def test_d_expansion_consistency(self):
        # omega1 must equal the truncated frequency series
        # sqrt(2) gamma (alpha - alpha^3/4) / 2 of the exact oscillation
        rng = np.random.default_rng(20240803)
        for _ in range(10):
            g = rng.uniform(0.5, 5.0)
            alpha = rng.uniform(0.05, 0.5)
            lam = alpha * alpha * g
            k = kernels.make_kernel("lorentzian", g, lam)
            co = ms.derive_ms_coefficients(
                kernels.taylor_coefficients(k, 4), g, lam)
            w1 = ms.ms1_frequency(co, k.alpha)
            series = math.sqrt(2) * g * (k.alpha - k.alpha ** 3 / 4) / 2
            assert abs(w1 - series) < 1e-12


class TestEvaluators:
    def test_initial_amplitude(self, lorentzian_coeffs):
        assert ms.eval_ms0(lorentzian_coeffs, 0.0) == 1.0
        assert ms.eval_ms1(lorentzian_coeffs, ALPHA, 0.0) == 1.0

    def test_ms0_first_zero(self, lorentzian_coeffs):
        t0 = math.pi / math.sqrt(2 * GAMMA * LAMBDA)
        assert t0 == pytest.approx(7.0248, abs=2e-4)
        assert abs(ms.eval_ms0(lorentzian_coeffs, t0)) < 1e-12

    def test_ms0_collapsed_keeps_oscillating(self, gaussian_coeffs):
        t = 2 * math.pi / gaussian_coeffs.omega0
        assert abs(ms.eval_ms0(gaussian_coeffs, t)) == pytest.approx(1.0, abs=1e-12)

    def test_ms1_matches_printed_form(self, lorentzian_coeffs):
        # e^(-lam t/2) [cos th + sqrt(lam/2g) sin th],
        # th = (sqrt(2 g lam)/2)(1 - lam/4g) t
        ts = np.linspace(0.0, 20.0, 401)
        th = (math.sqrt(2 * GAMMA * LAMBDA) / 2) * (1 - LAMBDA / (4 * GAMMA)) * ts
        printed = np.exp(-LAMBDA * ts / 2) * (
            np.cos(th) + math.sqrt(LAMBDA / (2 * GAMMA)) * np.sin(th))
        ours = ms.eval_ms1(lorentzian_coeffs, ALPHA, ts)
        assert linf(ours.real, printed) < 1e-14

    def test_ms1_rejected_when_collapsed(self, gaussian_coeffs):
        with pytest.raises(UnsupportedKernelError):
            ms.eval_ms1(gaussian_coeffs, ALPHA, 1.0)

    def test_ms1_quality_vs_closed_form(self, lorentzian_coeffs):
        ts = np.linspace(0.0, 20.0, 4001)
        exact = np.abs(volterra.lorentzian_closed_form(GAMMA, LAMBDA, ts)) ** 2
        p1 = np.abs(ms.eval_ms1(lorentzian_coeffs, ALPHA, ts)) ** 2
        p0 = np.abs(ms.eval_ms0(lorentzian_coeffs, ts)) ** 2
        e1, e0 = linf(p1, exact), linf(p0, exact)
        assert e1 < 0.05
        assert e1 < e0

    def test_dissipator_identity_ms0(self, lorentzian_coeffs):
        co = lorentzian_coeffs

        def c(t):
            return ms.eval_ms0(co, t).real

        for t in np.linspace(0.1, 6.0, 25):
            gam = -2 * d1_fd4(c, t) / c(t)
            assert abs(gam - gamma_ms0_closed(GAMMA, LAMBDA, t)) < 1e-8

    def test_dissipator_identity_ms1(self, lorentzian_coeffs):
        co = lorentzian_coeffs

        def c(t):
            return ms.eval_ms1(co, ALPHA, t).real

        for t in np.linspace(0.1, 6.0, 25):
            gam = -2 * d1_fd4(c, t) / c(t)
            assert abs(gam - gamma_ms1_closed(GAMMA, LAMBDA, t)) < 1e-9

    def test_initial_slope_is_perturbative(self, lorentzian_coeffs):
        # MS solutions honor C(0)=1 but reach dC/dt(0)=0 only to their
        # order: documented approximation property, not a defect
        co = lorentzian_coeffs
        slope0 = d1_forward4(lambda t: ms.eval_ms0(co, t).real, 0.0)
        assert slope0 == pytest.approx(co.decay, abs=1e-9)
        slope1 = d1_forward4(lambda t: ms.eval_ms1(co, ALPHA, t).real, 0.0)
        bound = abs(co.decay) + co.c1 * ALPHA * ms.ms1_frequency(co, ALPHA)
        assert abs(slope1) <= bound + 1e-9


class TestGammaSplit:
    def test_auxiliary_constant(self, lorentzian_coeffs):
        for t in (0.0, 1.0, 3.0, 6.9):
            primary, aux = ms.gamma_split(lorentzian_coeffs, ALPHA, t, ms.MS0)
            assert aux == LAMBDA
        assert ms.gamma_split(lorentzian_coeffs, ALPHA, 2.0, ms.MS1)[1] == LAMBDA

    def test_primary_vanishes_at_origin(self, lorentzian_coeffs):
        assert ms.gamma_split(lorentzian_coeffs, ALPHA, 0.0, ms.MS0)[0] == 0.0

    def test_collapsed_kernel_has_no_auxiliary(self, gaussian_coeffs):
        _, aux = ms.gamma_split(gaussian_coeffs, ALPHA, 1.0, ms.MS0)
        assert aux == 0.0

    @pytest.mark.parametrize("order", [ms.MS0, ms.MS1])
    def test_sum_is_dissipator(self, lorentzian_coeffs, order):
        co = lorentzian_coeffs
        for t in (0.5, 2.0, 5.5):
            primary, aux = ms.gamma_split(co, ALPHA, t, order)
            closed = (gamma_ms0_closed if order == ms.MS0
                      else gamma_ms1_closed)(GAMMA, LAMBDA, t)
            assert primary + aux == pytest.approx(closed, rel=1e-12)

    def test_guard_band(self, lorentzian_coeffs):
        sing = ms.ms_singularities(lorentzian_coeffs, ALPHA, ms.MS0, 10.0)[0]
        with pytest.raises(SingularityError) as err:
            ms.gamma_split(lorentzian_coeffs, ALPHA, sing, ms.MS0)
        assert err.value.location == pytest.approx(sing, abs=1e-12)


class TestSingularities:
    def test_ms0_values(self, lorentzian_coeffs):
        sings = ms.ms_singularities(lorentzian_coeffs, ALPHA, ms.MS0, 30.0)
        first = math.pi / math.sqrt(2 * GAMMA * LAMBDA)
        assert sings[0] == pytest.approx(first, rel=1e-14)
        spacing = math.pi / lorentzian_coeffs.omega0
        assert np.allclose(np.diff(sings), spacing, rtol=1e-12)
        assert sings[-1] <= 30.0

    def test_ms1_first_singularity(self, lorentzian_coeffs):
        co = lorentzian_coeffs
        sings = ms.ms_singularities(co, ALPHA, ms.MS1, 30.0)
        # independent closed form: first zero of cos + c1 a sin lies at
        # theta = pi/2 + arctan(c1 a), reflected from the principal branch
        w1 = ms.ms1_frequency(co, ALPHA)
        closed = (math.pi / 2 + math.atan(co.c1 * ALPHA)) / w1
        assert sings[0] == pytest.approx(closed, abs=1e-9)
        assert sings[0] == pytest.approx(8.214, abs=1e-3)

    def test_ordering_against_exact(self, lorentzian_coeffs):
        d = math.sqrt(2 * GAMMA * LAMBDA - LAMBDA ** 2)
        t_exact = (2 / d) * (math.pi - math.atan(d / LAMBDA))
        t0 = ms.ms_singularities(lorentzian_coeffs, ALPHA, ms.MS0, 30.0)[0]
        t1 = ms.ms_singularities(lorentzian_coeffs, ALPHA, ms.MS1, 30.0)[0]
        assert t0 < t1 < t_exact

    def test_collapsed_rejects_ms1(self, gaussian_coeffs):
        with pytest.raises(UnsupportedKernelError):
            ms.ms_singularities(gaussian_coeffs, ALPHA, ms.MS1, 10.0)


class TestTrajectories:
    @pytest.mark.parametrize("order", [ms.MS0, ms.MS1])
    def test_stored_derivative_is_exact(self, order):
        k = kernels.make_kernel("lorentzian", GAMMA, LAMBDA)
        traj = ms.ms_trajectory(k, order, volterra.SolverConfig(dt=1e-2, t_max=6.0))
        co = ms.derive_ms_coefficients(
            kernels.taylor_coefficients(k, 4), GAMMA, LAMBDA)

        def c(t):
            return (ms.eval_ms0(co, t) if order == ms.MS0
                    else ms.eval_ms1(co, ALPHA, t)).real

        for i in (30, 150, 420):
            t = traj.times[i]
            assert traj.c_dot[i].real == pytest.approx(d1_fd4(c, t), abs=1e-9)

    def test_report_keys(self):
        k = kernels.make_kernel("lorentzian", GAMMA, LAMBDA)
        report = ms.coefficients_report(k, 20.0)
        assert set(report) == {"omega0", "decay", "a1_over_a0", "b1_over_b0",
                               "c1", "collapsed_tau", "singularities_ms0",
                               "singularities_ms1"}
        kg = kernels.make_kernel("gaussian", GAMMA, LAMBDA)
        rg = ms.coefficients_report(kg, 20.0)
        assert rg["collapsed_tau"] is True
        assert rg["b1_over_b0"] is None
        assert rg["singularities_ms1"] is None
