"""Figure-bundle fixtures.

Bundles are produced by the real command-line tool through a subprocess,
so these tests exercise the actual wire formats end to end.
"""

import subprocess
import sys

import pytest


def generate_figure(n, out_dir, dt="0.01"):
    result = subprocess.run(
        [sys.executable, "-m", "nml", "figure", str(n), "--dt", dt,
         "--out", str(out_dir)],
        capture_output=True, text=True,
    )
    assert result.returncode == 0, result.stderr
    return out_dir / "manifest.json"


@pytest.fixture(scope="session")
def figure_bundles(tmp_path_factory):
    root = tmp_path_factory.mktemp("bundles")
    manifests = {}
    for n in (1, 2, 3):
        out_dir = root / f"figure{n}"
        manifests[n] = generate_figure(n, out_dir)
    return manifests
