"""Reservoir memory kernels.

A reservoir is described by its two-time correlation function
G(t, t') = G(t - t'); every family implemented here is stationary,
real-valued (resonant coupling) and normalized to G(0) = gamma*lambda/2,
so that gamma sets the absolute coupling strength, lambda the spectral
width, and the single dimensionless ratio alpha^2 = lambda/gamma selects
the coupling regime (alpha << 1: strong/oscillatory, alpha >> 1:
weak/Markovian).

Writing G(dt) = (gamma*lambda/2) * g(lambda*dt) with a unit profile
g(0) = 1, the rescaled kernel in units t~ = gamma*t is

    G~(d~) = (alpha^2 / 2) * g(alpha^2 * d~)
           = sum_n G_n * alpha^(2+2n) * d~^n,    G_n = g^(n)(0) / (2 n!),

which is the power expansion every perturbative consumer of this module
relies on.  All four families are analytic at zero separation; kernels
with fractional-power singularities (photonic band-gap media and the
like) are deliberately not representable here.

Profiles (x = lambda*dt):

    lorentzian      g(x) = exp(-x)
    gaussian-error  g(x) = erfc(sqrt(pi)/2 * x)   (G_1 matches lorentzian)
    inverse-law     g(x) = 1 / (1 + x)            (non-integrable tail)
    gaussian        g(x) = exp(-x^2)              (symmetric: G_1 = 0)

Kernels are immutable; all functions here are pure and thread-safe.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._special import erfc
from .errors import ParameterError, UnsupportedKernelError

KIND_LORENTZIAN = "lorentzian"
KIND_GAUSSIAN_ERROR = "gaussian-error"
KIND_INVERSE_LAW = "inverse-law"
KIND_GAUSSIAN = "gaussian"

KERNEL_KINDS = (
    KIND_LORENTZIAN,
    KIND_GAUSSIAN_ERROR,
    KIND_INVERSE_LAW,
    KIND_GAUSSIAN,
)

# erfc profile argument scaling, fixed so that the gaussian-error family
# shares the lorentzian's first derivative coefficient G_1 = -1/2.
_ERFC_SCALE = math.sqrt(math.pi) / 2.0

# n-th derivatives of the unit profile g at x = 0, for n = 0..3.
_PROFILE_DERIVS = {
    KIND_LORENTZIAN: (1.0, -1.0, 1.0, -1.0),
    KIND_GAUSSIAN_ERROR: (1.0, -1.0, 0.0, math.pi / 2.0),
    KIND_INVERSE_LAW: (1.0, -1.0, 2.0, -6.0),
    KIND_GAUSSIAN: (1.0, 0.0, -2.0, 0.0),
}

_MAX_TAYLOR_ORDER = 4


@dataclass(frozen=True)
class ReservoirKernel:
    """One reservoir family with fixed coupling strength and width.

    alpha is recomputed from (gamma, lambda) on construction and never
    stored independently, so the invariant alpha == sqrt(lambda/gamma)
    holds exactly.
    """

    kind: str
    gamma: float
    lam: float
    alpha: float

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ParameterError(
                f"unknown kernel kind {self.kind!r}; expected one of {KERNEL_KINDS}"
            )
        if not (self.gamma > 0):
            raise ParameterError(f"gamma must be positive, got {self.gamma}")
        if not (self.lam > 0):
            raise ParameterError(f"lambda must be positive, got {self.lam}")
        expected = math.sqrt(self.lam / self.gamma)
        if self.alpha != expected:
            raise ParameterError(
                f"alpha={self.alpha} inconsistent with sqrt(lambda/gamma)={expected}"
            )


@dataclass(frozen=True)
class KernelTaylor:
    """Dimensionless derivative coefficients G_0..G_{order-1} of the
    rescaled kernel."""

    coefficients: tuple
    order: int

    def __post_init__(self):
        if self.order != len(self.coefficients):
            raise ParameterError("order must equal the number of coefficients")
        if not (1 <= self.order <= _MAX_TAYLOR_ORDER):
            raise ParameterError(
                f"order must be in [1, {_MAX_TAYLOR_ORDER}], got {self.order}"
            )


def make_kernel(kind, gamma, lam):
    """Build a reservoir kernel of the given family.

    gamma and lambda carry units of 1/time and must be positive.
    """
    gamma = float(gamma)
    lam = float(lam)
    if not (gamma > 0):
        raise ParameterError(f"gamma must be positive, got {gamma}")
    if not (lam > 0):
        raise ParameterError(f"lambda must be positive, got {lam}")
    return ReservoirKernel(
        kind=kind, gamma=gamma, lam=lam, alpha=math.sqrt(lam / gamma),
    )


def profile(kernel, x):
    """Unit-normalized decay profile g(x) with x = lambda*dt.

    Defined for negative x as well (the analytic continuation used by the
    derivative checks); physical separations use ``correlation``.
    """
    x = np.asarray(x, dtype=float)
    kind = kernel.kind
    if kind == KIND_LORENTZIAN:
        return np.exp(-x)
    if kind == KIND_GAUSSIAN_ERROR:
        return erfc(_ERFC_SCALE * x)
    if kind == KIND_INVERSE_LAW:
        return 1.0 / (1.0 + x)
    return np.exp(-x * x)


def correlation(kernel, dt):
    """Correlation function G(dt) at separation dt >= 0.

    Accepts scalars or arrays; monotone nonincreasing in dt for every
    family.
    """
    dt = np.asarray(dt, dtype=float)
    if np.any(dt < 0):
        raise ParameterError("separation dt must be nonnegative")
    scale = 0.5 * kernel.gamma * kernel.lam
    out = scale * profile(kernel, kernel.lam * dt)
    return float(out) if out.ndim == 0 else out


def rescaled(kernel, dtau):
    """Dimensionless kernel G~(d~) on the rescaled grid t~ = gamma*t.

    Negative separations are allowed here: the power-expansion checks
    differentiate through zero.
    """
    dtau = np.asarray(dtau, dtype=float)
    a2 = kernel.alpha ** 2
    out = 0.5 * a2 * profile(kernel, a2 * dtau)
    return float(out) if out.ndim == 0 else out


def spectral_density(kernel, omega_detuning):
    """Spectral density J as a function of detuning from resonance.

    Only the lorentzian family has a regular closed form:
    J(u) = gamma*lambda^2 / (2*pi*(u^2 + lambda^2)), peaking at
    gamma/(2*pi).  The other families are either not closed-form or
    singular on resonance (the inverse-law density has a logarithmic
    divergence), so they are rejected.
    """
    if kernel.kind != KIND_LORENTZIAN:
        raise UnsupportedKernelError(
            f"spectral density is only available for the lorentzian kind, "
            f"not {kernel.kind!r}"
        )
    u = np.asarray(omega_detuning, dtype=float)
    out = kernel.gamma * kernel.lam ** 2 / (2.0 * np.pi * (u * u + kernel.lam ** 2))
    return float(out) if out.ndim == 0 else out


def taylor_coefficients(kernel, order):
    """First ``order`` coefficients {G_n} of the rescaled kernel's power
    expansion, computed analytically per family (G_n = g^(n)(0)/(2 n!))."""
    if not isinstance(order, int) or not (1 <= order <= _MAX_TAYLOR_ORDER):
        raise ParameterError(
            f"taylor order must be an integer in [1, {_MAX_TAYLOR_ORDER}], got {order}"
        )
    derivs = _PROFILE_DERIVS[kernel.kind]
    coeffs = tuple(derivs[n] / (2.0 * math.factorial(n)) for n in range(order))
    return KernelTaylor(coefficients=coeffs, order=order)
