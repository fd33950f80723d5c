"""The demo scripts are part of the deliverable; keep them running."""

import os
import subprocess
import sys

import pytest

DEMO_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "demos")
DEMOS = sorted(f for f in os.listdir(DEMO_DIR) if f.endswith(".py"))


def test_demo_list_is_complete():
    assert len(DEMOS) == 5


@pytest.mark.parametrize("script", DEMOS)
def test_demo_runs_clean(script):
    result = subprocess.run(
        [sys.executable, os.path.join(DEMO_DIR, script)],
        capture_output=True, text=True, timeout=120,
    )
    assert result.returncode == 0, result.stderr
    assert result.stdout.strip()
