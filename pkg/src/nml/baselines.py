"""Traditional perturbation baselines for the exponential (lorentzian)
reservoir.

Three families, each the standard textbook treatment of the same damped
amplitude equation, all known to misbehave in the strong-coupling
regime:

* ODP: naive power-series solution of the dimensionless oscillator
  C'' + a^2 C' + (a^2/2) C = 0  (t~ = gamma*t, a^2 = lambda/gamma).
  The coefficient polynomials grow secularly with t~, so truncations
  diverge instead of decaying; they are reported unclamped because that
  divergence is the phenomenon of interest.

* GME-2: second-order memory master equation.  Its population solves
  P'' + lambda*P' + gamma*lambda*P = 0 directly (no underlying
  amplitude), oscillates at the wrong frequency and goes negative.

* TCL-2/6: time-local master equation with the analytic rate
  Gamma_T(t); positive and monotone by construction, hence blind to
  population revivals.

All evaluators are pure, stateless and accept scalar or array t.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .volterra import AmplitudeTrajectory, SolverConfig, TrajectoryParams

METHOD_ODP2 = "odp2"
METHOD_ODP6 = "odp6"
METHOD_GME2 = "gme2"
METHOD_TCL2 = "tcl2"
METHOD_TCL6 = "tcl6"

BASELINE_METHODS = (METHOD_ODP2, METHOD_ODP6, METHOD_GME2, METHOD_TCL2,
                    METHOD_TCL6)

# Series coefficients of the dimensionless amplitude, C^(2n)(t~) as
# polynomials in t~ (ascending powers).  They satisfy the recurrence
# d2/dt~2 C^(n+2) = -d/dt~ C^(n) - C^(n)/2 with zero initial data.
ODP_POLYS = {
    0: np.array([1.0]),
    2: np.array([0.0, 0.0, -1.0 / 4.0]),
    4: np.array([0.0, 0.0, 0.0, 8.0 / 96.0, 1.0 / 96.0]),
    6: np.array([0.0, 0.0, 0.0, 0.0, -120.0 / 5760.0, -24.0 / 5760.0,
                 -1.0 / 5760.0]),
}


@dataclass(frozen=True)
class BaselineSpec:
    """One baseline method at fixed reservoir parameters."""

    method: str
    gamma: float
    lam: float

    def __post_init__(self):
        if self.method not in BASELINE_METHODS:
            raise ParameterError(
                f"unknown baseline {self.method!r}; expected one of "
                f"{BASELINE_METHODS}"
            )
        if not (self.gamma > 0 and self.lam > 0):
            raise ParameterError("gamma and lambda must be positive")


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ParameterError("t must be nonnegative")
    return t


def odp_amplitude(spec: BaselineSpec, t):
    """Truncated series amplitude sum_n a^n C^(n)(gamma*t)."""
    t = _check_t(t)
    tt = spec.gamma * t
    a2 = spec.lam / spec.gamma
    orders = (0, 2) if spec.method == METHOD_ODP2 else (0, 2, 4, 6)
    acc = np.zeros_like(tt)
    for n in orders:
        acc = acc + a2 ** (n // 2) * np.polynomial.polynomial.polyval(
            tt, ODP_POLYS[n])
    return acc


def odp_population(spec: BaselineSpec, t):
    """Squared truncated series; diverges secularly and is reported
    unclamped."""
    if spec.method not in (METHOD_ODP2, METHOD_ODP6):
        raise ParameterError(f"{spec.method!r} is not an ODP truncation")
    out = odp_amplitude(spec, t) ** 2
    return float(out) if out.ndim == 0 else out


def gme2_population(spec: BaselineSpec, t):
    """Population of the second-order memory master equation:

        P(t) = e^(-lambda*t/2) [cos(D_G t/2) + (lambda/D_G) sin(D_G t/2)],
        D_G = sqrt(4*gamma*lambda - lambda^2).

    This is a population, not an amplitude, and it may be negative; the
    hyperbolic branch (4*gamma*lambda < lambda^2) is handled through the
    complex square root exactly as in the closed amplitude.
    """
    if spec.method != METHOD_GME2:
        raise ParameterError(f"{spec.method!r} is not the GME-2 method")
    t = _check_t(t)
    gamma, lam = spec.gamma, spec.lam
    disc = 4.0 * gamma * lam - lam * lam
    if disc == 0.0:
        out = np.exp(-0.5 * lam * t) * (1.0 + 0.5 * lam * t)
    else:
        dg = np.sqrt(complex(disc))
        half = 0.5 * dg * t
        out = (np.exp(-0.5 * lam * t)
               * (np.cos(half) + (lam / dg) * np.sin(half))).real
    return float(out) if np.ndim(out) == 0 else out


def _gme2_population_derivative(spec, t):
    # dP/dt = -(2*gamma*lambda/D_G) e^(-lambda t/2) sin(D_G t/2)
    t = np.asarray(t, dtype=float)
    gamma, lam = spec.gamma, spec.lam
    disc = 4.0 * gamma * lam - lam * lam
    if disc == 0.0:
        return -gamma * lam * t * np.exp(-0.5 * lam * t)
    dg = np.sqrt(complex(disc))
    out = -(2.0 * gamma * lam / dg) * np.exp(-0.5 * lam * t) * np.sin(0.5 * dg * t)
    return out.real


def tcl_gamma(spec: BaselineSpec, t):
    """Time-local decay rate: the order-2 term alone, or orders 2+4+6.

        Gamma^(2) = gamma (1 - e^(-L))                     L = lambda*t
        Gamma^(4) = gamma^2/(2 lambda) (1 - 2L e^(-L) - e^(-2L))
        Gamma^(6) = gamma^3/(4 lambda^2) (2 + e^(-L) - 2L e^(-L)
                     - 2L^2 e^(-L) - 2e^(-2L) - 4L e^(-2L) - e^(-3L))
    """
    if spec.method not in (METHOD_TCL2, METHOD_TCL6):
        raise ParameterError(f"{spec.method!r} is not a TCL truncation")
    t = _check_t(t)
    g, lam = spec.gamma, spec.lam
    e1 = np.exp(-lam * t)
    out = g * (1.0 - e1)
    if spec.method == METHOD_TCL6:
        lt = lam * t
        e2 = e1 * e1
        e3 = e2 * e1
        out = out + (g * g / (2.0 * lam)) * (1.0 - 2.0 * lt * e1 - e2)
        out = out + (g ** 3 / (4.0 * lam * lam)) * (
            2.0 + e1 - 2.0 * lt * e1 - 2.0 * lt * lt * e1
            - 2.0 * e2 - 4.0 * lt * e2 - e3
        )
    return float(out) if out.ndim == 0 else out


def tcl_gamma_integral(spec: BaselineSpec, t):
    """Closed-form antiderivative int_0^t Gamma_T dt1 (every term is
    polynomial-exponential, so the integral is exact)."""
    if spec.method not in (METHOD_TCL2, METHOD_TCL6):
        raise ParameterError(f"{spec.method!r} is not a TCL truncation")
    t = _check_t(t)
    g, lam = spec.gamma, spec.lam
    e1 = np.exp(-lam * t)
    # int (1 - e^-L) = t - (1 - e^-L)/lambda
    out = g * (t - (1.0 - e1) / lam)
    if spec.method == METHOD_TCL6:
        lt = lam * t
        e2 = e1 * e1
        e3 = e2 * e1
        # int_0^t s e^(-lam*s) ds
        i_te1 = (1.0 - e1 * (1.0 + lt)) / (lam * lam)
        # int_0^t e^(-2*lam*s) ds
        i_e2 = (1.0 - e2) / (2.0 * lam)
        out = out + (g * g / (2.0 * lam)) * (t - 2.0 * lam * i_te1 - i_e2)
        i_e1 = (1.0 - e1) / lam
        # int_0^t s^2 e^(-lam*s) ds
        i_t2e1 = (2.0 - e1 * (lt * lt + 2.0 * lt + 2.0)) / (lam ** 3)
        # int_0^t s e^(-2*lam*s) ds
        i_te2 = (1.0 - e2 * (1.0 + 2.0 * lt)) / (4.0 * lam * lam)
        i_e3 = (1.0 - e3) / (3.0 * lam)
        out = out + (g ** 3 / (4.0 * lam * lam)) * (
            2.0 * t + i_e1 - 2.0 * lam * i_te1 - 2.0 * lam * lam * i_t2e1
            - 2.0 * i_e2 - 4.0 * lam * i_te2 - i_e3
        )
    return float(out) if out.ndim == 0 else out


def tcl_population(spec: BaselineSpec, t):
    """exp(-int_0^t Gamma_T): positive and monotone nonincreasing by
    construction."""
    out = np.exp(-tcl_gamma_integral(spec, t))
    return float(out) if np.ndim(out) == 0 else out


def baseline_trajectory(spec: BaselineSpec, config: SolverConfig) -> AmplitudeTrajectory:
    """Sample a baseline on a solver grid.

    ODP stores the signed series amplitude (population = amplitude^2).
    TCL stores the nonnegative amplitude sqrt(P) with the exact
    derivative -Gamma_T/2 * C.  GME-2 defines a population only; the
    population column carries it (sign included) and the amplitude slot
    repeats the same real waveform, so consumers must use ``population``
    rather than |c|^2 for this method.
    """
    times = np.arange(config.n_steps + 1) * config.dt
    params = TrajectoryParams("lorentzian", spec.gamma, spec.lam)
    if spec.method in (METHOD_ODP2, METHOD_ODP6):
        amp = odp_amplitude(spec, times)
        # derivative of the truncated series, exact via polynomial calculus
        a2 = spec.lam / spec.gamma
        orders = (0, 2) if spec.method == METHOD_ODP2 else (0, 2, 4, 6)
        deriv = np.zeros_like(times)
        for n in orders:
            dpoly = np.polynomial.polynomial.polyder(ODP_POLYS[n])
            deriv = deriv + a2 ** (n // 2) * np.polynomial.polynomial.polyval(
                spec.gamma * times, dpoly)
        c_dot = (spec.gamma * deriv).astype(complex)
        return AmplitudeTrajectory(
            times=times, c=amp.astype(complex), c_dot=c_dot,
            method_tag=spec.method, params=params,
        )
    if spec.method == METHOD_GME2:
        pop = gme2_population(spec, times)
        dpop = _gme2_population_derivative(spec, times)
        return AmplitudeTrajectory(
            times=times, c=pop.astype(complex), c_dot=dpop.astype(complex),
            method_tag=spec.method, params=params,
            population_override=np.asarray(pop, dtype=float),
        )
    pop = tcl_population(spec, times)
    amp = np.sqrt(pop)
    c_dot = (-0.5 * tcl_gamma(spec, times) * amp).astype(complex)
    return AmplitudeTrajectory(
        times=times, c=amp.astype(complex), c_dot=c_dot,
        method_tag=spec.method, params=params,
    )
