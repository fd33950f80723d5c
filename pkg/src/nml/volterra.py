"""Exact amplitude dynamics.

The excited-state amplitude of a resonantly coupled two-level emitter
obeys the memory-kernel equation

    dC/dt = -int_0^t G(t - s) C(s) ds,      C(0) = 1,

which forces dC/dt(0) = 0.  ``solve_exact`` integrates it for any
reservoir kernel with a product-trapezoidal scheme: the memory integral
over the stored history is evaluated with trapezoidal weights against
cached kernel samples (stationarity lets the samples G(k*dt) be computed
once), and the amplitude advances with a two-stage predictor-corrector.
The scheme is globally second-order accurate and costs O(n) per step,
O(n^2) overall.

For the lorentzian reservoir the equation reduces to the damped
oscillator  C'' + lambda*C' + (gamma*lambda/2)*C = 0, whose closed
solution ``lorentzian_closed_form`` serves as the test oracle for the
generic stepper.

Everything is complex-valued even though all in-scope kernels are real,
so the API is unchanged if complex kernels appear later.  Trajectories
are immutable once returned; distinct solves are independent and safe to
run concurrently.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import InstabilityError, ParameterError
from .kernels import ReservoirKernel, correlation

# Documented solver tolerance on the physical bound |C| <= 1.  The
# stepper aborts when |C| > 1 + 10*EPS_PHYS.
EPS_PHYS = 1e-6

# Half-step convergence assertion threshold (see SolverConfig.refine_check).
REFINE_TOL = 1e-4

_MAX_STEPS = 10 ** 8


class TrajectoryParams(NamedTuple):
    """Provenance echo: which reservoir produced a trajectory."""

    kind: str
    gamma: float
    lam: float


@dataclass(frozen=True)
class SolverConfig:
    """Uniform-grid solver parameters."""

    dt: float
    t_max: float
    refine_check: bool = False

    def __post_init__(self):
        if not (self.dt > 0):
            raise ParameterError(f"dt must be positive, got {self.dt}")
        if not (self.t_max >= self.dt):
            raise ParameterError("t_max must be at least one step")
        if self.t_max / self.dt > _MAX_STEPS:
            raise ParameterError(
                f"resource guard: t_max/dt = {self.t_max / self.dt:.3g} "
                f"exceeds {_MAX_STEPS:.0e} steps"
            )

    @property
    def n_steps(self):
        return int(round(self.t_max / self.dt))


@dataclass(frozen=True)
class AmplitudeTrajectory:
    """Sampled complex amplitude C(t) on a uniform grid starting at 0.

    ``c_dot`` stores the right-hand side actually used by the producer
    (None for trajectories re-read from disk, which carry no derivative).
    ``population`` is |C|^2 unless the producing method defines the
    population directly (the second-order memory master equation does, and
    its population may be negative); such methods fill
    ``population_override``.
    """

    times: np.ndarray
    c: np.ndarray
    c_dot: Optional[np.ndarray]
    method_tag: str
    params: Optional[TrajectoryParams]
    population_override: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in ("times", "c", "c_dot", "population_override"):
            arr = getattr(self, name)
            if arr is not None:
                arr.flags.writeable = False
        if len(self.times) != len(self.c):
            raise ParameterError("times and c must have equal length")
        if abs(self.c[0] - 1.0) > 1e-9:
            raise ParameterError("trajectories start from C(0) = 1")

    @property
    def population(self):
        if self.population_override is not None:
            return self.population_override
        return np.abs(self.c) ** 2

    @property
    def dt(self):
        return self.times[1] - self.times[0]

    @property
    def is_real(self):
        return np.all(self.c.imag == 0.0)


def _step_history(kernel_samples, c, dt, n_steps):
    """Core product-trapezoidal / predictor-corrector loop.

    kernel_samples[k] = G(k*dt), complex for BLAS-friendly dots.
    Mutates c in place, returns the stored derivatives.  A reversed copy
    of the history is maintained so the per-step dot runs over contiguous
    memory (~4x faster than a negative-stride view).
    """
    n_total = len(c) - 1
    c_dot = np.empty_like(c)
    c_dot[0] = 0.0
    rev = np.empty_like(c)   # rev[n_total - k] = c[k]
    rev[n_total] = c[0]
    g0 = kernel_samples[0]
    half_dt = 0.5 * dt
    bound = 1.0 + 10.0 * EPS_PHYS
    for n in range(n_steps):
        # Trapezoidal memory integral at t_{n+1} over the known history
        # (endpoint k = n+1 excluded; its weight is attached below).
        j = half_dt * kernel_samples[n + 1] * c[0]
        if n >= 1:
            j += dt * np.dot(kernel_samples[1:n + 1], rev[n_total - n:n_total])
        # Predict the endpoint with an Euler step, then correct with the
        # trapezoidal rule in time.
        c_pred = c[n] + dt * c_dot[n]
        rhs_pred = -(j + half_dt * g0 * c_pred)
        c[n + 1] = c[n] + half_dt * (c_dot[n] + rhs_pred)
        rev[n_total - (n + 1)] = c[n + 1]
        # Store the right-hand side evaluated at the corrected value.
        c_dot[n + 1] = -(j + half_dt * g0 * c[n + 1])
        if abs(c[n + 1]) > bound:
            raise InstabilityError(
                f"|C({(n + 1) * dt:.6g})| = {abs(c[n + 1]):.6g} exceeds "
                f"1 + {10 * EPS_PHYS:g}; reduce dt"
            )
    return c_dot


def solve_exact(kernel: ReservoirKernel, config: SolverConfig) -> AmplitudeTrajectory:
    """Integrate the memory-kernel amplitude equation on a uniform grid.

    Deterministic: identical inputs yield bit-identical outputs.  Raises
    InstabilityError when the amplitude leaves the physical bound, which
    for this scheme means the step is too coarse for the kernel's
    frequency content.
    """
    n = config.n_steps
    dt = config.dt
    times = np.arange(n + 1) * dt
    # Stationarity: one kernel sample per lag covers every step.
    samples = correlation(kernel, times).astype(np.complex128)
    c = np.empty(n + 1, dtype=np.complex128)
    c[0] = 1.0
    c_dot = _step_history(samples, c, dt, n)

    if config.refine_check:
        fine = SolverConfig(dt=dt / 2.0, t_max=config.t_max, refine_check=False)
        fine_traj = solve_exact(kernel, fine)
        drift = np.max(np.abs(fine_traj.c[::2] - c))
        if drift > REFINE_TOL:
            raise InstabilityError(
                f"half-step check failed: coarse/fine amplitudes differ by "
                f"{drift:.3g} > {REFINE_TOL:g}; reduce dt"
            )

    return AmplitudeTrajectory(
        times=times, c=c, c_dot=c_dot, method_tag="exact-numeric",
        params=TrajectoryParams(kernel.kind, kernel.gamma, kernel.lam),
    )


def lorentzian_closed_form(gamma, lam, t):
    """Closed amplitude of the lorentzian reservoir.

        C(t) = e^(-lambda*t/2) [cos(D t/2) + (lambda/D) sin(D t/2)],
        D = sqrt(2*gamma*lambda - lambda^2).

    D is evaluated in the complex plane, so the weak-coupling branch
    (2*gamma*lambda < lambda^2, D imaginary) comes out hyperbolic and the
    result is real in both regimes; the degenerate point D = 0 uses the
    analytic limit e^(-lambda*t/2) (1 + lambda*t/2).  Accepts scalar or
    array t >= 0.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ParameterError("t must be nonnegative")
    gamma = float(gamma)
    lam = float(lam)
    disc = 2.0 * gamma * lam - lam * lam
    if disc == 0.0:
        out = np.exp(-0.5 * lam * t) * (1.0 + 0.5 * lam * t) + 0j
    else:
        d = np.sqrt(complex(disc))
        half = 0.5 * d * t
        out = np.exp(-0.5 * lam * t) * (np.cos(half) + (lam / d) * np.sin(half))
    return complex(out) if out.ndim == 0 else out


def lorentzian_closed_form_derivative(gamma, lam, t):
    """Time derivative of the closed lorentzian amplitude.

    Differentiating the closed form collapses to
    dC/dt = -(gamma*lambda/D) e^(-lambda*t/2) sin(D t/2), with the D -> 0
    limit -(gamma*lambda/2) t e^(-lambda*t/2).
    """
    t = np.asarray(t, dtype=float)
    gamma = float(gamma)
    lam = float(lam)
    disc = 2.0 * gamma * lam - lam * lam
    if disc == 0.0:
        out = -0.5 * gamma * lam * t * np.exp(-0.5 * lam * t) + 0j
    else:
        d = np.sqrt(complex(disc))
        out = -(gamma * lam / d) * np.exp(-0.5 * lam * t) * np.sin(0.5 * d * t)
    return complex(out) if out.ndim == 0 else out


def closed_form_trajectory(gamma, lam, config: SolverConfig) -> AmplitudeTrajectory:
    """Sample the closed lorentzian solution on a solver grid."""
    times = np.arange(config.n_steps + 1) * config.dt
    c = np.asarray(lorentzian_closed_form(gamma, lam, times))
    c_dot = np.asarray(lorentzian_closed_form_derivative(gamma, lam, times))
    return AmplitudeTrajectory(
        times=times, c=c, c_dot=c_dot, method_tag="closed-form",
        params=TrajectoryParams("lorentzian", float(gamma), float(lam)),
    )
