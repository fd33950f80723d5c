"""Command-line front end.

Subcommands
-----------
solve      exact trajectory CSV for one reservoir
perturb    trajectory CSV from one approximation method
compare    population-distance report between two trajectory files
diagnose   master-equation coefficients from a trajectory file
sweep      one run per point of a parameter grid, plus an index
figure     CSV bundle + manifest for one of the three summary figures:
             1  traditional baselines vs the exact solution
             2  two-scale approximants vs the exact solution
             3  generic-reservoir gallery (2x3 panels)

Flags can also come from a flat JSON config (--config); explicit flags
win.  Outputs without --out are auto-named inside $NML_OUT_DIR (default:
current directory).  Every command prints a one-line JSON summary on
stdout.  Exit codes: 0 success, 2 usage/parameter error, 3 solver
instability, 4 I/O failure.
"""

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import baselines, diagnostics, kernels, multiscale, volterra
from .csvio import (fmt, read_trajectory_csv, write_kernel_csv,
                    write_trajectory_csv)
from .errors import InstabilityError, ParameterError
from .volterra import SolverConfig

COMMANDS = ("solve", "perturb", "compare", "diagnose", "sweep", "figure")
METHODS = ("exact", "closed-form", "ms0", "ms1") + baselines.BASELINE_METHODS
SWEEPABLE = ("gamma", "lambda", "dt", "t-max")

OUT_DIR_ENV = "NML_OUT_DIR"


@dataclass
class RunSpec:
    """One CLI job, assembled from flags and/or a JSON config."""

    command: str
    kernel: str = "lorentzian"
    gamma: float = 1.0
    lam: float = 0.1
    method: Optional[str] = None
    dt: Optional[float] = None
    t_max: Optional[float] = None
    out_path: Optional[str] = None
    threshold: Optional[float] = None
    sweep: Optional[Tuple[str, float, float, int]] = None
    figure: Optional[int] = None
    inputs: List[str] = field(default_factory=list)


@dataclass
class RunResult:
    status: str
    outputs: List[str]
    summary: dict


def _out_dir():
    return os.environ.get(OUT_DIR_ENV, ".")


def _solver_config(spec: RunSpec) -> SolverConfig:
    dt = spec.dt if spec.dt is not None else 1e-3 / spec.gamma
    t_max = spec.t_max if spec.t_max is not None else 20.0 / spec.gamma
    return SolverConfig(dt=dt, t_max=t_max)


def _auto_path(name):
    directory = _out_dir()
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, name)


def _make_kernel(spec: RunSpec):
    if spec.kernel not in kernels.KERNEL_KINDS:
        raise ParameterError(
            f"unknown kernel {spec.kernel!r}; expected one of "
            f"{kernels.KERNEL_KINDS}"
        )
    return kernels.make_kernel(spec.kernel, spec.gamma, spec.lam)


def _ms_coeffs(kernel):
    return multiscale.derive_ms_coefficients(
        kernels.taylor_coefficients(kernel, 4), kernel.gamma, kernel.lam
    )


def _linf_population(a, b):
    return float(np.max(np.abs(a.population - b.population)))


def _ms1_improves(kernel, config, exact_traj=None):
    """Runtime validation of the first-order approximant for kernels the
    quadrature coefficient was extrapolated to: MS1 must beat MS0 against
    the exact numeric solve, else it is reported unavailable."""
    if exact_traj is None:
        exact_traj = volterra.solve_exact(kernel, config)
    ms0 = multiscale.ms_trajectory(kernel, multiscale.MS0, config)
    ms1 = multiscale.ms_trajectory(kernel, multiscale.MS1, config)
    e0 = _linf_population(ms0, exact_traj)
    e1 = _linf_population(ms1, exact_traj)
    return e1 < e0, e1, e0


def _method_trajectory(spec: RunSpec, config, warnings_out):
    """Build the trajectory for ``perturb``; may downgrade ms1 -> ms0."""
    method = spec.method
    kern = _make_kernel(spec)
    if method == "exact":
        return volterra.solve_exact(kern, config)
    if method in ("closed-form",) + baselines.BASELINE_METHODS:
        if spec.kernel != kernels.KIND_LORENTZIAN:
            raise ParameterError(
                f"method {method!r} is specific to the lorentzian kernel"
            )
        if method == "closed-form":
            return volterra.closed_form_trajectory(spec.gamma, spec.lam, config)
        return baselines.baseline_trajectory(
            baselines.BaselineSpec(method, spec.gamma, spec.lam), config
        )
    if method == "ms0":
        return multiscale.ms_trajectory(kern, multiscale.MS0, config)
    if method == "ms1":
        coeffs = _ms_coeffs(kern)
        if coeffs.collapsed_tau:
            warnings_out.append(
                f"ms1 undefined for kernel {kern.kind!r} (decay scale "
                f"collapses, G_1 = 0); falling back to ms0"
            )
            return multiscale.ms_trajectory(kern, multiscale.MS0, config,
                                            coeffs=coeffs)
        if kern.kind != kernels.KIND_LORENTZIAN:
            ok, e1, e0 = _ms1_improves(kern, config)
            if not ok:
                raise ParameterError(
                    f"ms1 unavailable for kernel {kern.kind!r} at these "
                    f"parameters: Linf {e1:.4g} does not improve on ms0's "
                    f"{e0:.4g}; no output written"
                )
        return multiscale.ms_trajectory(kern, multiscale.MS1, config,
                                        coeffs=coeffs)
    raise ParameterError(
        f"unknown method {method!r}; expected one of {METHODS}"
    )


def _cmd_solve(spec: RunSpec) -> RunResult:
    kern = _make_kernel(spec)
    config = _solver_config(spec)
    traj = volterra.solve_exact(kern, config)
    coeffs = None
    if spec.threshold is not None:
        coeffs = diagnostics.master_coefficients(traj, spec.threshold)
    out = spec.out_path or _auto_path(
        f"solve_{spec.kernel}_g{fmt(spec.gamma)}_l{fmt(spec.lam)}.csv")
    write_trajectory_csv(out, traj, coeffs=coeffs)
    return RunResult("ok", [out], {
        "command": "solve", "kernel": spec.kernel, "gamma": spec.gamma,
        "lambda": spec.lam, "dt": config.dt, "t_max": config.t_max,
        "rows": len(traj.times), "diagnostics": coeffs is not None,
    })


def _cmd_perturb(spec: RunSpec) -> RunResult:
    if spec.method is None:
        raise ParameterError("perturb requires --method")
    if spec.method not in METHODS:
        raise ParameterError(
            f"unknown method {spec.method!r}; expected one of {METHODS}")
    config = _solver_config(spec)
    warnings_out = []
    traj = _method_trajectory(spec, config, warnings_out)
    out = spec.out_path or _auto_path(
        f"{spec.method}_{spec.kernel}_g{fmt(spec.gamma)}_l{fmt(spec.lam)}.csv")
    write_trajectory_csv(out, traj)
    outputs = [out]
    summary = {
        "command": "perturb", "method": spec.method,
        "method_emitted": traj.method_tag, "kernel": spec.kernel,
        "gamma": spec.gamma, "lambda": spec.lam, "rows": len(traj.times),
    }
    if warnings_out:
        summary["warnings"] = warnings_out
    if traj.method_tag in (multiscale.MS0, multiscale.MS1):
        report = multiscale.coefficients_report(_make_kernel(spec),
                                                config.t_max)
        coeffs_path = os.path.splitext(out)[0] + ".coeffs.json"
        _write_json(coeffs_path, report)
        outputs.append(coeffs_path)
    return RunResult("ok", outputs, summary)


def _cmd_compare(spec: RunSpec) -> RunResult:
    if len(spec.inputs) != 2:
        raise ParameterError("compare needs exactly two trajectory files")
    a = read_trajectory_csv(spec.inputs[0])
    b = read_trajectory_csv(spec.inputs[1])
    report = diagnostics.compare(a, b).as_dict()
    outputs = []
    if spec.out_path:
        _write_json(spec.out_path, report)
        outputs.append(spec.out_path)
    return RunResult("ok", outputs, {"command": "compare", **report})


# Positivity slack for the GKSL verdict at the CLI: files quantize the
# amplitude at 12 significant digits and the finite-difference rate
# inherits ~1e-9 of noise, far below any physical negative-rate interval.
_GKSL_TOL = 1e-6


def _cmd_diagnose(spec: RunSpec) -> RunResult:
    if len(spec.inputs) != 1:
        raise ParameterError("diagnose needs exactly one trajectory file")
    traj = read_trajectory_csv(spec.inputs[0])
    threshold = (spec.threshold if spec.threshold is not None
                 else diagnostics.SINGULARITY_THRESHOLD)
    coeffs = diagnostics.master_coefficients(traj, threshold)
    report = diagnostics.diagnostics_report(traj, threshold, tol=_GKSL_TOL)
    stem = spec.out_path or _auto_path(
        os.path.splitext(os.path.basename(spec.inputs[0]))[0]
        + "_diagnostics.json")
    json_path = stem if stem.endswith(".json") else stem + ".json"
    csv_path = os.path.splitext(json_path)[0] + ".csv"
    _write_json(json_path, report)
    write_trajectory_csv(csv_path, traj, coeffs=coeffs)
    return RunResult("ok", [json_path, csv_path],
                     {"command": "diagnose", **report})


def _sweep_values(sweep):
    name, start, stop, count = sweep
    if name not in SWEEPABLE:
        raise ParameterError(
            f"cannot sweep {name!r}; expected one of {SWEEPABLE}")
    if count < 1:
        raise ParameterError("sweep count must be >= 1")
    return list(np.linspace(start, stop, count))


def _cmd_sweep(spec: RunSpec) -> RunResult:
    if spec.sweep is None:
        raise ParameterError("sweep requires --sweep name:start:stop:count")
    name, start, stop, count = spec.sweep
    values = _sweep_values(spec.sweep)
    method = spec.method or "exact"
    if method not in METHODS:
        raise ParameterError(
            f"unknown method {method!r}; expected one of {METHODS}")
    out_dir = spec.out_path or _auto_path(f"sweep_{name}")
    os.makedirs(out_dir, exist_ok=True)

    def one(value):
        point = RunSpec(command="perturb", kernel=spec.kernel,
                        gamma=spec.gamma, lam=spec.lam, method=method,
                        dt=spec.dt, t_max=spec.t_max)
        setattr(point, {"gamma": "gamma", "lambda": "lam", "dt": "dt",
                        "t-max": "t_max"}[name], float(value))
        config = _solver_config(point)
        traj = _method_trajectory(point, config, [])
        path = os.path.join(out_dir, f"{method}_{name}_{fmt(value)}.csv")
        write_trajectory_csv(path, traj)
        return path

    with ThreadPoolExecutor(max_workers=min(4, count)) as pool:
        files = list(pool.map(one, values))
    index = {
        "parameter": name, "values": [float(v) for v in values],
        "files": [os.path.basename(f) for f in files],
        "kernel": spec.kernel, "gamma": spec.gamma, "lambda": spec.lam,
        "method": method,
    }
    index_path = os.path.join(out_dir, "index.json")
    _write_json(index_path, index)
    return RunResult("ok", files + [index_path], {
        "command": "sweep", "parameter": name, "count": count,
        "out_dir": out_dir,
    })


# Figure parameter point shared by all three bundles.
_FIG_GAMMA = 1.0
_FIG_LAMBDA = 0.1

_FIG1_METHODS = ("odp2", "odp6", "gme2", "tcl2", "tcl6")
_FIG3_KERNELS = (kernels.KIND_GAUSSIAN_ERROR, kernels.KIND_INVERSE_LAW,
                 kernels.KIND_GAUSSIAN)


def _figure_config(spec: RunSpec) -> SolverConfig:
    dt = spec.dt if spec.dt is not None else 1e-3 / _FIG_GAMMA
    t_max = spec.t_max if spec.t_max is not None else 20.0 / _FIG_GAMMA
    return SolverConfig(dt=dt, t_max=t_max)


def _cmd_figure(spec: RunSpec) -> RunResult:
    n = spec.figure
    if n not in (1, 2, 3):
        raise ParameterError("figure number must be 1, 2 or 3")
    out_dir = spec.out_path or _auto_path(f"figure{n}")
    os.makedirs(out_dir, exist_ok=True)
    config = _figure_config(spec)
    curves = []
    notes = []

    def emit(fname, traj, label, style, panel=None):
        write_trajectory_csv(os.path.join(out_dir, fname), traj)
        entry = {"label": label, "csv": fname, "style": style}
        if panel is not None:
            entry["panel"] = panel
        curves.append(entry)

    if n == 1:
        kern = kernels.make_kernel(kernels.KIND_LORENTZIAN, _FIG_GAMMA,
                                   _FIG_LAMBDA)
        emit("exact.csv", volterra.solve_exact(kern, config), "exact", "solid")
        for method in _FIG1_METHODS:
            traj = baselines.baseline_trajectory(
                baselines.BaselineSpec(method, _FIG_GAMMA, _FIG_LAMBDA), config)
            emit(f"{method}.csv", traj, method, "dashed")
    elif n == 2:
        kern = kernels.make_kernel(kernels.KIND_LORENTZIAN, _FIG_GAMMA,
                                   _FIG_LAMBDA)
        emit("exact.csv", volterra.solve_exact(kern, config), "exact", "solid")
        emit("ms0.csv", multiscale.ms_trajectory(kern, multiscale.MS0, config),
             "ms0", "dashed")
        emit("ms1.csv", multiscale.ms_trajectory(kern, multiscale.MS1, config),
             "ms1", "dotted")
    else:
        sep = np.arange(0, 50.0 + 1e-9, 0.05)
        for i, kind in enumerate(_FIG3_KERNELS):
            kern = kernels.make_kernel(kind, _FIG_GAMMA, _FIG_LAMBDA)
            kpath = f"kernel_{kind}.csv"
            write_kernel_csv(os.path.join(out_dir, kpath), sep,
                             kernels.correlation(kern, sep))
            curves.append({"label": f"{kind} correlation", "csv": kpath,
                           "style": "kernel", "panel": "abc"[i]})
            panel = "def"[i]
            exact = volterra.solve_exact(kern, config)
            emit(f"{kind}_exact.csv", exact, "exact", "solid", panel)
            coeffs = _ms_coeffs(kern)
            emit(f"{kind}_ms0.csv",
                 multiscale.ms_trajectory(kern, multiscale.MS0, config,
                                          coeffs=coeffs),
                 "ms0", "dashed", panel)
            if coeffs.collapsed_tau:
                notes.append(
                    f"ms1 unavailable for {kind}: decay scale collapses "
                    f"(G_1 = 0)")
                continue
            ok, e1, e0 = _ms1_improves(kern, config, exact_traj=exact)
            if not ok:
                notes.append(
                    f"ms1 unavailable for {kind}: Linf {e1:.4g} does not "
                    f"improve on ms0's {e0:.4g}")
                continue
            emit(f"{kind}_ms1.csv",
                 multiscale.ms_trajectory(kern, multiscale.MS1, config,
                                          coeffs=coeffs),
                 "ms1", "dotted", panel)

    manifest = {
        "figure": n, "gamma": _FIG_GAMMA, "lambda": _FIG_LAMBDA,
        "dt": config.dt, "t_max": config.t_max, "curves": curves,
    }
    if notes:
        manifest["notes"] = notes
    manifest_path = os.path.join(out_dir, "manifest.json")
    _write_json(manifest_path, manifest)
    outputs = [os.path.join(out_dir, c["csv"]) for c in curves]
    outputs.append(manifest_path)
    return RunResult("ok", outputs, {
        "command": "figure", "figure": n, "out_dir": out_dir,
        "manifest": manifest_path, "curves": len(curves),
    })


def _write_json(path, payload):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(spec: RunSpec) -> RunResult:
    """Execute one job."""
    handler = {
        "solve": _cmd_solve, "perturb": _cmd_perturb,
        "compare": _cmd_compare, "diagnose": _cmd_diagnose,
        "sweep": _cmd_sweep, "figure": _cmd_figure,
    }.get(spec.command)
    if handler is None:
        raise ParameterError(
            f"unknown command {spec.command!r}; expected one of {COMMANDS}")
    return handler(spec)


def _parse_sweep(text):
    parts = text.split(":")
    if len(parts) != 4:
        raise ParameterError("--sweep expects name:start:stop:count")
    name, start, stop, count = parts
    return name, float(start), float(stop), int(count)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="nml",
        description="Two-level emitter dynamics in structured reservoirs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_flags(p, *, physics=False, grid=False, method=False,
                  threshold=False):
        if physics:
            p.add_argument("--kernel", default=None,
                           help="reservoir kind: "
                           + ", ".join(kernels.KERNEL_KINDS))
            p.add_argument("--gamma", type=float, default=None,
                           help="coupling strength (1/time)")
            p.add_argument("--lambda", dest="lam", type=float, default=None,
                           help="spectral width (1/time)")
        if grid:
            p.add_argument("--dt", type=float, default=None,
                           help="grid step (default 1e-3/gamma)")
            p.add_argument("--t-max", dest="t_max", type=float, default=None,
                           help="horizon (default 20/gamma)")
        if method:
            p.add_argument("--method", default=None,
                           help=f"one of: {', '.join(METHODS)}")
        if threshold:
            p.add_argument("--threshold", type=float, default=None,
                           help="|C| singularity threshold for diagnostics")
        p.add_argument("--out", dest="out_path", default=None,
                       help="output path (default: auto-named in $NML_OUT_DIR)")
        p.add_argument("--config", default=None,
                       help="flat JSON config; explicit flags override it")

    p = sub.add_parser("solve", help="exact trajectory CSV")
    add_flags(p, physics=True, grid=True, threshold=True)
    p = sub.add_parser("perturb", help="approximation-method trajectory CSV")
    add_flags(p, physics=True, grid=True, method=True)
    p = sub.add_parser("compare", help="distance report between two CSVs")
    add_flags(p)
    p.add_argument("inputs", nargs=2, metavar="TRAJ_CSV")
    p = sub.add_parser("diagnose", help="master-equation coefficients")
    add_flags(p, threshold=True)
    p.add_argument("inputs", nargs=1, metavar="TRAJ_CSV")
    p = sub.add_parser("sweep", help="run a parameter grid")
    add_flags(p, physics=True, grid=True, method=True)
    p.add_argument("--sweep", dest="sweep", default=None,
                   metavar="name:start:stop:count",
                   help=f"sweepable: {', '.join(SWEEPABLE)}")
    p = sub.add_parser("figure", help="CSV bundle + manifest for figure N")
    add_flags(p, grid=True)
    p.add_argument("figure", type=int, choices=(1, 2, 3))
    return parser


_CONFIG_KEYS = {
    "kernel": "kernel", "gamma": "gamma", "lambda": "lam", "method": "method",
    "dt": "dt", "t-max": "t_max", "t_max": "t_max", "out": "out_path",
    "threshold": "threshold", "sweep": "sweep",
}


def _spec_from_args(args) -> RunSpec:
    spec = RunSpec(command=args.command)
    if getattr(args, "config", None):
        with open(args.config) as fh:
            payload = json.load(fh)
        if not isinstance(payload, dict):
            raise ParameterError("config must be a flat JSON object")
        for key, value in payload.items():
            attr = _CONFIG_KEYS.get(key)
            if attr is None:
                raise ParameterError(f"unknown config key {key!r}")
            if attr == "sweep":
                if isinstance(value, str):
                    value = _parse_sweep(value)
                else:
                    name, start, stop, count = value
                    value = (str(name), float(start), float(stop), int(count))
            setattr(spec, attr, value)
    for attr in ("kernel", "gamma", "lam", "method", "dt", "t_max",
                 "out_path", "threshold"):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(spec, attr, value)
    if getattr(args, "sweep", None) is not None:
        spec.sweep = _parse_sweep(args.sweep)
    if getattr(args, "figure", None) is not None:
        spec.figure = args.figure
    if getattr(args, "inputs", None):
        spec.inputs = list(args.inputs)
    return spec


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        spec = _spec_from_args(args)
        result = run(spec)
    except InstabilityError as exc:
        print(f"nml: solver instability: {exc}", file=sys.stderr)
        return 3
    except (ParameterError, ValueError) as exc:
        print(f"nml: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"nml: i/o failure: {exc}", file=sys.stderr)
        return 4
    payload = {"status": result.status, **result.summary,
               "outputs": result.outputs}
    print(json.dumps(payload))
    return 0


if __name__ == "__main__":
    sys.exit(main())
