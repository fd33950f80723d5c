"""Self-contained complementary error function.

erfc is the only special function the kernel zoo needs, so it is kept
in-repo instead of pulling in a special-function dependency.  The
implementation combines the alternating Maclaurin series of erf (small
arguments) with the Gauss continued fraction of erfc (large arguments);
both are evaluated to double-precision roundoff, giving absolute error
below 1e-12 everywhere (checked against an independent oracle in the
test suite).
"""

import numpy as np

_SQRT_PI = np.sqrt(np.pi)
# Crossover between the series and the continued fraction.  At x = 3 the
# series still carries ~1e-14 cancellation error and the fraction already
# converges in < 64 terms, so either side of the split is safe.
_SPLIT = 3.0
_CF_TERMS = 64
_SERIES_TERMS = 48


def _erf_series(x):
    # erf(x) = 2/sqrt(pi) * sum_n (-1)^n x^(2n+1) / (n! (2n+1)), |x| <= _SPLIT
    x = np.asarray(x, dtype=float)
    term = x.copy()
    acc = term.copy()
    x2 = x * x
    for n in range(1, _SERIES_TERMS):
        term = term * (-x2) / n
        acc = acc + term / (2 * n + 1)
    return (2.0 / _SQRT_PI) * acc


def _erfc_cf(x):
    # Gauss continued fraction, valid for x > 0 and fast for x >= _SPLIT:
    # sqrt(pi) e^(x^2) erfc(x) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    x = np.asarray(x, dtype=float)
    f = x.copy()
    for k in range(_CF_TERMS, 0, -1):
        f = x + (0.5 * k) / f
    return np.exp(-x * x) / (_SQRT_PI * f)


def erfc(x):
    """Complementary error function, elementwise over arrays."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)

    ax = np.abs(x)
    small = ax <= _SPLIT
    if np.any(small):
        out[small] = 1.0 - _erf_series(x[small])
    large = ~small
    if np.any(large):
        tail = _erfc_cf(ax[large])
        out[large] = np.where(x[large] > 0, tail, 2.0 - tail)

    return out[0] if scalar else out
