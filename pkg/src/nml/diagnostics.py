"""Master-equation coefficients and non-Markovianity diagnostics.

Any amplitude trajectory defines an exact time-local master equation
whose coefficients follow from the logarithmic derivative:

    Gamma(t) = -2 Re{ C'(t) / C(t) }      (dissipator / decay rate)
    S(t)     = -2 Im{ C'(t) / C(t) }      (frequency shift)

The evolution is Markovian exactly when Gamma(t) >= 0 everywhere; a
population revival forces Gamma < 0 somewhere, and a population zero is
a genuine singularity of Gamma.  This module extracts (Gamma, S) from
trajectories, locates the singularities and negative-rate intervals,
computes the first-orthogonality time (the first zero of |C|, i.e. the
minimal time to reach the state orthogonal to the initial one), and
quantifies the distance between two trajectories.

All functions are pure over immutable trajectories and thread-safe.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import ParameterError
from .volterra import AmplitudeTrajectory

# Default |C| threshold below which a grid point sits in a singular
# region: Gamma diverges at population zeros, so such points are
# excluded from the reported coefficients instead of showing up as huge
# finite values.
SINGULARITY_THRESHOLD = 1e-6

# A trajectory counts as real when its imaginary part is at this level.
_REAL_TOL = 1e-12


@dataclass(frozen=True)
class MasterEqCoefficients:
    """Sampled dissipator and shift, with the points inside singular
    regions removed and recorded separately."""

    times: np.ndarray
    gamma_t: np.ndarray
    s_t: np.ndarray
    negative_intervals: List[Tuple[float, float]]
    singularities: List[float]

    def __post_init__(self):
        for name in ("times", "gamma_t", "s_t"):
            getattr(self, name).flags.writeable = False


@dataclass(frozen=True)
class ComparisonReport:
    """Population distance between two trajectories on their shared grid."""

    linf_population: float
    l2_population: float
    t_hat_a: Optional[float]
    t_hat_b: Optional[float]
    t_hat_rel_error: Optional[float]

    def as_dict(self):
        return {
            "linf_population": self.linf_population,
            "l2_population": self.l2_population,
            "t_hat_a": self.t_hat_a,
            "t_hat_b": self.t_hat_b,
            "t_hat_rel_error": self.t_hat_rel_error,
        }


def _derivative_fd4(c, dt):
    """4th-order central differences with one-sided closures at the ends."""
    n = len(c)
    d = np.empty_like(c)
    if n >= 5:
        d[2:-2] = (c[:-4] - 8 * c[1:-3] + 8 * c[3:-1] - c[4:]) / (12 * dt)
        # 4th-order one-sided stencils for the two points at each edge
        edge = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
        d[0] = np.dot(edge, c[:5]) / dt
        d[1] = np.dot(edge, c[1:6]) / dt
        d[-1] = -np.dot(edge, c[-1:-6:-1]) / dt
        d[-2] = -np.dot(edge, c[-2:-7:-1]) / dt
    else:
        d[:] = np.gradient(c, dt)
    return d


def _is_real(c):
    scale = np.max(np.abs(c)) or 1.0
    return np.max(np.abs(c.imag)) <= _REAL_TOL * scale


def _zero_crossings(times, values):
    """Linear-interpolation zeros of a sampled real function, one per
    sign change."""
    out = []
    v = values
    for i in np.flatnonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0):
        t0, t1 = times[i], times[i + 1]
        f0, f1 = v[i], v[i + 1]
        out.append(t0 + (t1 - t0) * (-f0) / (f1 - f0))
    for i in np.flatnonzero(v == 0.0):
        if i > 0:  # t = 0 starts at C = 1, never a zero
            out.append(times[i])
    return sorted(out)


def _refine_min_quadratic(times, mags, i):
    """Vertex of the parabola through the three samples around index i."""
    if i == 0 or i == len(times) - 1:
        return float(times[i])
    y0, y1, y2 = mags[i - 1], mags[i], mags[i + 1]
    denom = y0 - 2 * y1 + y2
    if denom <= 0:
        return float(times[i])
    shift = 0.5 * (y0 - y2) / denom
    shift = min(max(shift, -1.0), 1.0)
    return float(times[i] + shift * (times[i + 1] - times[i]))


def _find_singularities(traj: AmplitudeTrajectory, threshold):
    """Times where |C| reaches (numerically) zero.

    For real trajectories every sign change of Re C is a zero regardless
    of how closely the grid straddles it; dips of |C| below the threshold
    catch the complex case and are refined by a local parabola on |C|.
    """
    mags = np.abs(traj.c)
    sings = []
    if _is_real(traj.c):
        sings.extend(_zero_crossings(traj.times, traj.c.real))
    below = mags < threshold
    if np.any(below):
        idx = np.flatnonzero(below)
        # one representative (the deepest point) per contiguous run
        runs = np.split(idx, np.flatnonzero(np.diff(idx) > 1) + 1)
        for run in runs:
            if run[0] == 0:
                continue
            i = run[np.argmin(mags[run])]
            t = _refine_min_quadratic(traj.times, mags, i)
            if not any(abs(t - s) <= 2 * traj.dt for s in sings):
                sings.append(t)
    return sorted(sings), below


def _negative_runs(times, values, cut=0.0):
    """Disjoint ascending (t_start, t_end) intervals where values < -cut."""
    neg = values < -cut
    intervals = []
    idx = np.flatnonzero(neg)
    if idx.size == 0:
        return intervals
    runs = np.split(idx, np.flatnonzero(np.diff(idx) > 1) + 1)
    for run in runs:
        intervals.append((float(times[run[0]]), float(times[run[-1]])))
    return intervals


def master_coefficients(traj: AmplitudeTrajectory,
                        singularity_threshold=SINGULARITY_THRESHOLD
                        ) -> MasterEqCoefficients:
    """Extract Gamma(t) and S(t) from a trajectory.

    Uses the stored derivative when the trajectory carries one; otherwise
    falls back to 4th-order central differences.  Grid points with
    |C| below the threshold are excluded from the report and recorded as
    singularity candidates alongside the zero crossings of real
    trajectories.
    """
    if len(traj.times) < 3:
        raise ParameterError("trajectory too short for coefficient extraction")
    if not (0 < singularity_threshold < 1):
        raise ParameterError("singularity threshold must lie in (0, 1)")
    c_dot = traj.c_dot
    if c_dot is None:
        c_dot = _derivative_fd4(traj.c, traj.dt)
    singularities, below = _find_singularities(traj, singularity_threshold)
    keep = ~below
    ratio = c_dot[keep] / traj.c[keep]
    gamma_t = -2.0 * ratio.real
    s_t = -2.0 * ratio.imag
    times = traj.times[keep].astype(float)
    return MasterEqCoefficients(
        times=times,
        gamma_t=np.asarray(gamma_t, dtype=float),
        s_t=np.asarray(s_t, dtype=float),
        negative_intervals=_negative_runs(times, gamma_t),
        singularities=singularities,
    )


def is_markovian(coeffs: MasterEqCoefficients, tol=0.0):
    """GKSL test: Markovian iff Gamma >= -tol everywhere reported and no
    singularity was detected.  Returns (verdict, offending_intervals)."""
    if tol < 0:
        raise ParameterError("tol must be nonnegative")
    offending = _negative_runs(coeffs.times, coeffs.gamma_t, cut=tol)
    verdict = not offending and not coeffs.singularities
    return verdict, offending


def minimal_evolution_time(traj: AmplitudeTrajectory,
                           singularity_threshold=SINGULARITY_THRESHOLD
                           ) -> Optional[float]:
    """First time |C| reaches zero, i.e. first arrival at the state
    orthogonal to the initial one.

    Real trajectories use sign-change bracketing of Re C followed by
    bisection on the linear interpolant (absolute tolerance 1e-10);
    complex ones use parabolic refinement of the first |C| minimum below
    the threshold.  None when the amplitude never gets there.
    """
    if _is_real(traj.c):
        v = traj.c.real
        sign_flips = np.flatnonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)
        exact_zero = np.flatnonzero(v[1:] == 0.0)
        candidates = []
        if sign_flips.size:
            i = sign_flips[0]
            t0, t1 = float(traj.times[i]), float(traj.times[i + 1])
            f0, f1 = float(v[i]), float(v[i + 1])
            while t1 - t0 > 1e-10:
                tm = 0.5 * (t0 + t1)
                fm = f0 + (f1 - f0) * (tm - t0) / (t1 - t0)
                if (fm > 0) == (f0 > 0):
                    t0, f0 = tm, fm
                else:
                    t1, f1 = tm, fm
            candidates.append(0.5 * (t0 + t1))
        if exact_zero.size:
            candidates.append(float(traj.times[exact_zero[0] + 1]))
        return min(candidates) if candidates else None
    mags = np.abs(traj.c)
    below = np.flatnonzero(mags < singularity_threshold)
    below = below[below > 0]
    if below.size == 0:
        return None
    return _refine_min_quadratic(traj.times, mags, below[0])


def compare(a: AmplitudeTrajectory, b: AmplitudeTrajectory) -> ComparisonReport:
    """Population distance between two runs of the same system.

    The comparison grid is the coarser of the two, restricted to the
    shared time range, with the finer population linearly interpolated.
    The relative minimal-time error uses the second trajectory as the
    reference.  Trajectories loaded from files carry no parameter echo
    and skip the coupling-strength consistency check.
    """
    if a.params is not None and b.params is not None:
        if a.params.gamma != b.params.gamma:
            raise ParameterError(
                f"trajectories have different gamma: {a.params.gamma} vs "
                f"{b.params.gamma}"
            )
    t_end = min(a.times[-1], b.times[-1])
    coarse, fine = (a, b) if a.dt >= b.dt else (b, a)
    grid = coarse.times[coarse.times <= t_end * (1 + 1e-12)]
    pop_coarse = coarse.population[: len(grid)]
    pop_fine = np.interp(grid, fine.times, fine.population)
    diff = np.abs(pop_coarse - pop_fine)
    linf = float(np.max(diff))
    l2 = float(np.sqrt(np.mean(diff ** 2)))
    t_hat_a = minimal_evolution_time(a)
    t_hat_b = minimal_evolution_time(b)
    rel = None
    if t_hat_a is not None and t_hat_b is not None and t_hat_b != 0:
        rel = abs(t_hat_a - t_hat_b) / t_hat_b
    return ComparisonReport(
        linf_population=linf, l2_population=l2,
        t_hat_a=t_hat_a, t_hat_b=t_hat_b, t_hat_rel_error=rel,
    )


def diagnostics_report(traj: AmplitudeTrajectory,
                       singularity_threshold=SINGULARITY_THRESHOLD,
                       tol=0.0) -> dict:
    """JSON-ready non-Markovianity summary for one trajectory."""
    coeffs = master_coefficients(traj, singularity_threshold)
    markovian, offending = is_markovian(coeffs, tol)
    return {
        "markovian": markovian,
        "negative_intervals": [list(iv) for iv in offending],
        "singularities": coeffs.singularities,
        "t_hat": minimal_evolution_time(traj, singularity_threshold),
    }
