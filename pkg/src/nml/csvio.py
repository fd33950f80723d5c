"""Trajectory CSV format shared by every command and the figure tooling.

Layout::

    # nml-trajectory method=<tag> kernel=<kind> gamma=<g> lambda=<l>
    t,re_c,im_c,population,gamma_t,s_t
    0,1,0,1,,
    ...

One row per grid point.  Values are written as shortest round-trip
decimals capped at 12 significant digits, locale-independent, '.'
decimal separator, so identical inputs always produce byte-identical
files.  The gamma_t / s_t columns stay empty unless diagnostics were
requested; grid points inside a singular region keep them empty in an
otherwise-augmented file.  The leading '#' metadata line carries the
provenance echo (standard CSV tooling skips it via comment='#'); files
missing it parse fine with unknown provenance.

Kernel-profile CSVs (the correlation-function panels of the reservoir
gallery) use the two-column header ``dt,g`` with the same number format.

Writes are atomic: a temporary file in the target directory is populated
first and then renamed over the destination.
"""

import os
import tempfile

import numpy as np

from .errors import ParameterError
from .volterra import AmplitudeTrajectory, TrajectoryParams

TRAJECTORY_HEADER = "t,re_c,im_c,population,gamma_t,s_t"
KERNEL_HEADER = "dt,g"
_META_PREFIX = "# nml-trajectory"


def fmt(x) -> str:
    """Shortest decimal capped at 12 significant digits."""
    if x != x:
        return "nan"
    x = float(x)
    if x == 0.0:
        return "0"   # fold -0.0 into 0
    return format(x, ".12g")


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_trajectory_csv(path, traj: AmplitudeTrajectory, coeffs=None):
    """Write a trajectory; pass MasterEqCoefficients to fill the
    diagnostic columns (points excluded there stay empty)."""
    gamma_col = {}
    s_col = {}
    if coeffs is not None:
        for t, g, s in zip(coeffs.times, coeffs.gamma_t, coeffs.s_t):
            gamma_col[float(t)] = fmt(g)
            s_col[float(t)] = fmt(s)
    pop = traj.population
    lines = []
    if traj.params is not None:
        meta = (f"{_META_PREFIX} method={traj.method_tag} "
                f"kernel={traj.params.kind} gamma={fmt(traj.params.gamma)} "
                f"lambda={fmt(traj.params.lam)}")
    else:
        meta = f"{_META_PREFIX} method={traj.method_tag}"
    lines.append(meta)
    lines.append(TRAJECTORY_HEADER)
    for i, t in enumerate(traj.times):
        key = float(t)
        lines.append(",".join([
            fmt(t), fmt(traj.c[i].real), fmt(traj.c[i].imag), fmt(pop[i]),
            gamma_col.get(key, ""), s_col.get(key, ""),
        ]))
    _atomic_write(path, "\n".join(lines) + "\n")


def read_trajectory_csv(path) -> AmplitudeTrajectory:
    """Parse a trajectory file back into an AmplitudeTrajectory.

    The stored derivative is not part of the format, so the result
    carries c_dot = None and downstream coefficient extraction uses its
    finite-difference path.
    """
    method = "file"
    params = None
    with open(path, "r", newline="") as fh:
        first = fh.readline().strip()
        if first.startswith("#"):
            fields = dict(
                kv.split("=", 1) for kv in first.lstrip("# ").split()
                if "=" in kv
            )
            method = fields.get("method", "file")
            if {"kernel", "gamma", "lambda"} <= fields.keys():
                params = TrajectoryParams(
                    fields["kernel"], float(fields["gamma"]),
                    float(fields["lambda"]),
                )
            header = fh.readline().strip()
        else:
            header = first
        if header != TRAJECTORY_HEADER:
            raise ParameterError(
                f"{path}: expected header {TRAJECTORY_HEADER!r}, got {header!r}"
            )
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    if not rows:
        raise ParameterError(f"{path}: no data rows")
    times = np.array([float(r[0]) for r in rows])
    c = np.array([complex(float(r[1]), float(r[2])) for r in rows])
    pop = np.array([float(r[3]) for r in rows])
    return AmplitudeTrajectory(
        times=times, c=c, c_dot=None, method_tag=method, params=params,
        population_override=pop,
    )


def write_kernel_csv(path, separations, values):
    """Two-column correlation-function profile."""
    lines = [KERNEL_HEADER]
    for s, v in zip(separations, values):
        lines.append(f"{fmt(s)},{fmt(v)}")
    _atomic_write(path, "\n".join(lines) + "\n")
