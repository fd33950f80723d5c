"""Two-scale perturbation approximants for the amplitude equation.

In the strong-coupling regime (alpha = sqrt(lambda/gamma) << 1) the
amplitude mixes a fast oscillation with a slow decay.  Treating the two
as independent time variables

    T   = (A_0 alpha + A_1 alpha^3 + ...) t      (oscillation)
    tau = (B_0 alpha^2 + B_1 alpha^4 + ...) t    (decay envelope)

and eliminating secular growth order by order turns the kernel's Taylor
data {G_n} into a small set of physical coefficients:

    omega0     = sqrt(G_0) * gamma * alpha          leading frequency
    decay      = gamma * alpha^2 * G_1 / (2 G_0)    envelope exponent (<= 0)
    A_1/A_0    = 3 G_1^2 / (8 G_0^3) - G_2 / G_0^2  frequency correction
    B_1/B_0    = -G_1^2/G_0^3 + 4 G_2/G_0^2 - 6 G_3/(G_1 G_0)
    c_1        = -G_1 / (2 G_0^(3/2))               in-quadrature amplitude

A_0 and B_0 are not identifiable from physical-time observables and are
normalized to 1.  The evaluators return

    MS0:  C(t) = e^(decay*t) cos(omega0*t)
    MS1:  C(t) = e^(decay*t) [cos(omega1*t) + c_1*alpha*sin(omega1*t)],
          omega1 = omega0 * (1 + (A_1/A_0) * alpha^2),

which keep C(0) = 1 but satisfy dC/dt(0) = 0 only to their perturbative
order (dC/dt(0) = decay for MS0).  The c_1 and envelope forms for
non-exponential kernels extend the secular-elimination algebra beyond
the case it was originally closed for; they are validated against the
exact numeric solver in the tests, and the command-line layer refuses to
emit an MS1 curve for a kernel where it fails to improve on MS0.

Symmetric kernels have G_1 = 0: the decay scale collapses
(``collapsed_tau``), MS0 degenerates to a pure oscillation, and MS1 is
undefined.  When the oscillation survives, the dissipator inherits a
tangent-like pole wherever the amplitude crosses zero; the convergence
of the frequency-correction series (radius alpha < sqrt(2) for the
exponential kernel) is conjectured to delimit the oscillatory regime,
but no such test is implemented here.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    GrowingEnvelopeError,
    ParameterError,
    SingularityError,
    UnsupportedKernelError,
)
from .kernels import KernelTaylor, ReservoirKernel, taylor_coefficients
from .volterra import AmplitudeTrajectory, SolverConfig, TrajectoryParams

MS0 = "ms0"
MS1 = "ms1"

_G1_ZERO_TOL = 1e-12
# Guard band around dissipator singularities, in units of float spacing.
_GUARD_ULPS = 100.0

_BISECT_TOL = 1e-10


@dataclass(frozen=True)
class MsCoefficients:
    """Derived two-scale quantities for one kernel at one (gamma, lambda)."""

    omega0: float
    decay: float
    a1_over_a0: float
    b1_over_b0: Optional[float]
    c1: float
    collapsed_tau: bool


def derive_ms_coefficients(taylor: KernelTaylor, gamma, lam) -> MsCoefficients:
    """Turn kernel Taylor data into two-scale coefficients.

    Needs G_0..G_2 always, plus G_3 when G_1 != 0 (the decay-scale
    correction divides by G_1).  Kernels with G_0 <= 0 have no oscillatory
    leading order and are rejected; G_1 > 0 would grow the envelope and is
    rejected as a bad kernel definition.
    """
    gamma = float(gamma)
    lam = float(lam)
    if not (gamma > 0 and lam > 0):
        raise ParameterError("gamma and lambda must be positive")
    g = taylor.coefficients
    g0 = g[0]
    if g0 <= 0:
        raise UnsupportedKernelError(
            f"G_0 = {g0} <= 0: no oscillatory leading order"
        )
    g1 = g[1] if taylor.order >= 2 else 0.0
    if g1 > _G1_ZERO_TOL:
        raise GrowingEnvelopeError(
            f"G_1 = {g1} > 0 would grow the envelope; decaying kernels "
            f"have G_1 <= 0"
        )
    collapsed = abs(g1) <= _G1_ZERO_TOL

    min_order = 3 if collapsed else 4
    if taylor.order < min_order:
        raise ParameterError(
            f"taylor order {taylor.order} too low: need >= {min_order} "
            f"{'(G_1 = 0)' if collapsed else '(B_1 requires G_3)'}"
        )
    g2 = g[2]

    alpha = math.sqrt(lam / gamma)
    omega0 = math.sqrt(g0) * gamma * alpha
    a1_over_a0 = 3.0 * (g1 * g1) / (8.0 * g0 ** 3) - g2 / (g0 * g0)
    if collapsed:
        decay = 0.0
        b1_over_b0 = None
        c1 = 0.0
    else:
        g3 = g[3]
        decay = gamma * alpha ** 2 * g1 / (2.0 * g0)
        b1_over_b0 = (
            -(g1 * g1) / (g0 ** 3) + 4.0 * g2 / (g0 * g0) - 6.0 * (g3 / (g1 * g0))
        )
        c1 = -g1 / (2.0 * g0 ** 1.5)
    return MsCoefficients(
        omega0=omega0, decay=decay, a1_over_a0=a1_over_a0,
        b1_over_b0=b1_over_b0, c1=c1, collapsed_tau=collapsed,
    )


def ms1_frequency(coeffs: MsCoefficients, alpha) -> float:
    """Corrected oscillation frequency omega1 = omega0 (1 + (A1/A0) alpha^2)."""
    return coeffs.omega0 * (1.0 + coeffs.a1_over_a0 * alpha * alpha)


def eval_ms0(coeffs: MsCoefficients, t):
    """Leading-order amplitude e^(decay*t) cos(omega0*t).

    Real-valued but returned complex to match the trajectory convention.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ParameterError("t must be nonnegative")
    out = (np.exp(coeffs.decay * t) * np.cos(coeffs.omega0 * t)).astype(complex)
    return complex(out) if out.ndim == 0 else out


def eval_ms1(coeffs: MsCoefficients, alpha, t):
    """First-order amplitude with corrected phase and quadrature term."""
    if coeffs.collapsed_tau:
        raise UnsupportedKernelError(
            "MS1 is undefined when the decay scale collapses (G_1 = 0); "
            "use eval_ms0"
        )
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ParameterError("t must be nonnegative")
    w1 = ms1_frequency(coeffs, alpha)
    b = coeffs.c1 * alpha
    out = (np.exp(coeffs.decay * t)
           * (np.cos(w1 * t) + b * np.sin(w1 * t))).astype(complex)
    return complex(out) if out.ndim == 0 else out


def _eval_ms_derivative(coeffs, alpha, order, t):
    """Analytic d/dt of the MS evaluators (used for stored trajectory
    derivatives)."""
    t = np.asarray(t, dtype=float)
    a = coeffs.decay
    if order == MS0:
        w = coeffs.omega0
        out = np.exp(a * t) * (a * np.cos(w * t) - w * np.sin(w * t))
    else:
        w = ms1_frequency(coeffs, alpha)
        b = coeffs.c1 * alpha
        out = np.exp(a * t) * ((a + b * w) * np.cos(w * t)
                               + (a * b - w) * np.sin(w * t))
    return out.astype(complex)


def _oscillator_zeros(w, b, t_max):
    """Ascending zeros of cos(w*t) + b*sin(w*t) in (0, t_max], located by
    bracketing and bisection."""
    if w == 0.0:
        return []
    aw = abs(w)

    def f(t):
        return math.cos(w * t) + b * math.sin(w * t)

    zeros = []
    # Zeros are spaced pi/|w|; an eighth-period scan cannot skip a bracket.
    step = math.pi / (8.0 * aw)
    t_lo = 0.0
    f_lo = f(t_lo)
    while t_lo < t_max:
        t_hi = min(t_lo + step, t_max)
        f_hi = f(t_hi)
        if f_lo == 0.0:
            pass  # endpoint zero already appended by the previous bisection
        elif f_hi == 0.0:
            zeros.append(t_hi)
        elif (f_lo > 0) != (f_hi > 0):
            a_, b_ = t_lo, t_hi
            while b_ - a_ > _BISECT_TOL:
                mid = 0.5 * (a_ + b_)
                fm = f(mid)
                if fm == 0.0:
                    a_ = b_ = mid
                    break
                if (f(a_) > 0) != (fm > 0):
                    b_ = mid
                else:
                    a_ = mid
            zeros.append(0.5 * (a_ + b_))
        t_lo, f_lo = t_hi, f_hi
    return zeros


def ms_singularities(coeffs: MsCoefficients, alpha, order, t_max):
    """Dissipator singularities (amplitude zeros) in (0, t_max], ascending.

    MS0 zeros are the odd multiples of pi/(2*omega0); MS1 zeros come from
    bracketing + bisection on the oscillatory factor, to absolute
    tolerance 1e-10.
    """
    if order not in (MS0, MS1):
        raise ParameterError(f"order must be {MS0!r} or {MS1!r}, got {order!r}")
    if not (t_max > 0):
        raise ParameterError("t_max must be positive")
    if order == MS0:
        if coeffs.omega0 == 0.0:
            return []
        first = math.pi / (2.0 * coeffs.omega0)
        spacing = math.pi / coeffs.omega0
        n = int(math.floor((t_max - first) / spacing)) + 1 if t_max >= first else 0
        return [first + k * spacing for k in range(n)]
    if coeffs.collapsed_tau:
        raise UnsupportedKernelError("MS1 singularities undefined: G_1 = 0")
    w1 = ms1_frequency(coeffs, alpha)
    return _oscillator_zeros(w1, coeffs.c1 * alpha, t_max)


def gamma_split(coeffs: MsCoefficients, alpha, t, order=MS0):
    """Split the MS dissipator into its two scale contributions at time t.

    Returns (primary_part, auxiliary_part).  The auxiliary (decay-scale)
    part is the constant -2*decay = -gamma*alpha^2*G_1/G_0; the primary
    (oscillation-scale) part is -2 d/dt ln of the oscillatory factor, so
    the sum is the full dissipator -2 Re{dC/dt / C} of the corresponding
    MS solution.  Raises SingularityError inside the guard band of an
    amplitude zero.
    """
    t = float(t)
    if t < 0:
        raise ParameterError("t must be nonnegative")
    aux = -2.0 * coeffs.decay
    if order == MS0:
        w, b = coeffs.omega0, 0.0
    elif order == MS1:
        if coeffs.collapsed_tau:
            raise UnsupportedKernelError("MS1 undefined: G_1 = 0")
        w, b = ms1_frequency(coeffs, alpha), coeffs.c1 * alpha
    else:
        raise ParameterError(f"order must be {MS0!r} or {MS1!r}, got {order!r}")

    if w != 0.0:
        horizon = t + math.pi / abs(w)
        guard = _GUARD_ULPS * np.spacing(max(abs(t), 1.0))
        for s in ms_singularities(coeffs, alpha, order, horizon):
            if abs(t - s) <= guard:
                raise SingularityError(
                    f"t = {t!r} lies within the guard band of the "
                    f"dissipator singularity at {s!r}", location=s,
                )
    denom = math.cos(w * t) + b * math.sin(w * t)
    num = -w * math.sin(w * t) + b * w * math.cos(w * t)
    primary = -2.0 * num / denom
    return primary, aux


def ms_trajectory(kernel: ReservoirKernel, order, config: SolverConfig,
                  coeffs: Optional[MsCoefficients] = None) -> AmplitudeTrajectory:
    """Sample an MS approximant on a solver grid, with analytic derivative."""
    if coeffs is None:
        coeffs = derive_ms_coefficients(
            taylor_coefficients(kernel, 4), kernel.gamma, kernel.lam
        )
    times = np.arange(config.n_steps + 1) * config.dt
    if order == MS0:
        c = eval_ms0(coeffs, times)
    elif order == MS1:
        c = eval_ms1(coeffs, kernel.alpha, times)
    else:
        raise ParameterError(f"order must be {MS0!r} or {MS1!r}, got {order!r}")
    c_dot = _eval_ms_derivative(coeffs, kernel.alpha, order, times)
    return AmplitudeTrajectory(
        times=times, c=np.asarray(c), c_dot=c_dot, method_tag=order,
        params=TrajectoryParams(kernel.kind, kernel.gamma, kernel.lam),
    )


def coefficients_report(kernel: ReservoirKernel, t_max) -> dict:
    """JSON-ready summary of the derived coefficients and singularities."""
    coeffs = derive_ms_coefficients(
        taylor_coefficients(kernel, 4), kernel.gamma, kernel.lam
    )
    if coeffs.collapsed_tau:
        sing1 = None
    else:
        sing1 = ms_singularities(coeffs, kernel.alpha, MS1, t_max)
    return {
        "omega0": coeffs.omega0,
        "decay": coeffs.decay,
        "a1_over_a0": coeffs.a1_over_a0,
        "b1_over_b0": coeffs.b1_over_b0,
        "c1": coeffs.c1,
        "collapsed_tau": coeffs.collapsed_tau,
        "singularities_ms0": ms_singularities(coeffs, kernel.alpha, MS0, t_max),
        "singularities_ms1": sing1,
    }
