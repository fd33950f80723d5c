"""Render population-vs-time figures from nml CSV/manifest bundles.

Usage: render_figures <manifest.json> <out.png>

The script is a pure consumer of the documented wire formats: trajectory
CSVs (``t,re_c,im_c,population,gamma_t,s_t`` with an optional leading
'#' metadata line) and kernel-profile CSVs (``dt,g``).  It never
recomputes physics; the only numeric transformation applied is axis
clipping.

Rendering defaults (reconstructed; the source material for these plots
is not machine-readable):
  - population panels show |C(t)|^2 against t, clipped to [-0.5, 1.5]
    for the baseline-comparison bundle (figure 1, whose diverging series
    would otherwise flatten everything) and [-0.7, 1.05] elsewhere;
  - kernel panels show G(dt) against the separation, unclipped;
  - bundles with panel annotations render as a 2-row grid (profiles on
    top, populations below); flat bundles render as one axes;
  - styling is a fixed deterministic table, so re-rendering a manifest
    yields an identical plot specification.
"""

import csv
import json
import os
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

TRAJECTORY_HEADER = ["t", "re_c", "im_c", "population", "gamma_t", "s_t"]
KERNEL_HEADER = ["dt", "g"]

_LINESTYLES = {"solid": "-", "dashed": "--", "dotted": ":", "kernel": "-"}
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#17becf")

_FIG1_YLIM = (-0.5, 1.5)
_DEFAULT_YLIM = (-0.7, 1.05)


class ManifestError(Exception):
    pass


def _read_rows(path, expected_header):
    if not os.path.exists(path):
        raise ManifestError(f"missing CSV: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader, None)
        if header != expected_header:
            raise ManifestError(
                f"invalid CSV {path}: header {header} != {expected_header}")
        rows = [row for row in reader if row]
    if not rows:
        raise ManifestError(f"invalid CSV {path}: no data rows")
    return rows


def read_population_curve(path):
    rows = _read_rows(path, TRAJECTORY_HEADER)
    t = [float(r[0]) for r in rows]
    pop = [float(r[3]) for r in rows]
    return t, pop


def read_kernel_curve(path):
    rows = _read_rows(path, KERNEL_HEADER)
    return [float(r[0]) for r in rows], [float(r[1]) for r in rows]


def load_manifest(path):
    with open(path) as fh:
        manifest = json.load(fh)
    curves = manifest.get("curves", [])
    if not curves:
        raise ManifestError(f"manifest {path} lists no curves")
    base = os.path.dirname(os.path.abspath(path))
    for curve in curves:
        curve["csv"] = os.path.join(base, curve["csv"])
    return manifest


def _plot_curve(ax, curve, color):
    style = _LINESTYLES.get(curve.get("style", "solid"), "-")
    if curve.get("style") == "kernel":
        x, y = read_kernel_curve(curve["csv"])
        ax.set_ylabel("G(dt)")
        ax.set_xlabel("separation")
    else:
        x, y = read_population_curve(curve["csv"])
        ax.set_ylabel("population")
        ax.set_xlabel("t")
    ax.plot(x, y, style, color=color, label=curve["label"], linewidth=1.4)


def render(manifest, out_path):
    """Render one manifest to one image file."""
    curves = manifest["curves"]
    figure_id = manifest.get("figure")
    panels = sorted({c["panel"] for c in curves if "panel" in c})
    if panels:
        ncols = max(1, (len(panels) + 1) // 2)
        fig, axes = plt.subplots(2, ncols, figsize=(4.2 * ncols, 6.4))
        axes_by_panel = dict(zip(panels, axes.flatten(order="C")))
        for panel in panels:
            ax = axes_by_panel[panel]
            members = [c for c in curves if c.get("panel") == panel]
            for i, curve in enumerate(members):
                _plot_curve(ax, curve, _COLORS[i % len(_COLORS)])
            ax.set_title(f"({panel})", fontsize=10)
            if any(c.get("style") != "kernel" for c in members):
                ax.set_ylim(*_DEFAULT_YLIM)
            ax.legend(fontsize=7)
    else:
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for i, curve in enumerate(curves):
            _plot_curve(ax, curve, _COLORS[i % len(_COLORS)])
        ax.set_ylim(*(_FIG1_YLIM if figure_id == 1 else _DEFAULT_YLIM))
        ax.legend(fontsize=8)
    if figure_id is not None:
        fig.suptitle(f"figure {figure_id}", fontsize=11)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 2:
        print("usage: render_figures <manifest.json> <out.png>",
              file=sys.stderr)
        return 2
    manifest_path, out_path = argv
    try:
        manifest = load_manifest(manifest_path)
        render(manifest, out_path)
    except (ManifestError, OSError, json.JSONDecodeError) as exc:
        print(f"render_figures: {exc}", file=sys.stderr)
        return 1
    print(out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
