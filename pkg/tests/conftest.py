"""Session-scoped solves shared across test modules.

The exact integrator is O(n^2); caching the handful of canonical runs
keeps the whole suite well under the runtime budget.
"""

import pytest

from nml import kernels, volterra

# The published comparison point used throughout: gamma=1, lambda=0.1.
GAMMA = 1.0
LAMBDA = 0.1


@pytest.fixture(scope="session")
def lorentzian_kernel():
    return kernels.make_kernel("lorentzian", GAMMA, LAMBDA)


@pytest.fixture(scope="session")
def exact_lorentzian_30(lorentzian_kernel):
    """Exact solve at dt=1e-3 out to t=30 (covers two amplitude zeros)."""
    return volterra.solve_exact(
        lorentzian_kernel, volterra.SolverConfig(dt=1e-3, t_max=30.0))


@pytest.fixture(scope="session")
def exact_lorentzian_30_half(lorentzian_kernel):
    return volterra.solve_exact(
        lorentzian_kernel, volterra.SolverConfig(dt=5e-4, t_max=30.0))


@pytest.fixture(scope="session")
def exact_weak_lorentzian():
    """Weak coupling (gamma < lambda/2): unidirectional decay."""
    kern = kernels.make_kernel("lorentzian", 0.04, 0.1)
    return volterra.solve_exact(
        kern, volterra.SolverConfig(dt=5e-3, t_max=100.0))


@pytest.fixture(scope="session")
def exact_by_kind():
    """Exact solves for all four kernels at the published point, t <= 20."""
    cfg = volterra.SolverConfig(dt=1e-3, t_max=20.0)
    return {
        kind: volterra.solve_exact(kernels.make_kernel(kind, GAMMA, LAMBDA), cfg)
        for kind in kernels.KERNEL_KINDS
    }


@pytest.fixture(scope="session")
def exact_markovian_regime():
    """gamma=1, lambda=10: the regime where resummed baselines converge."""
    kern = kernels.make_kernel("lorentzian", 1.0, 10.0)
    return volterra.solve_exact(kern, volterra.SolverConfig(dt=1e-3, t_max=2.0))
