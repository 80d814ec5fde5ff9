import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import settings

from wearsar.forward import acquire
from wearsar.motion import SwingSpec, arm_swing
from wearsar.scene import PointScatterer, make_sweep

settings.register_profile("wearsar", deadline=None)
settings.load_profile("wearsar")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def small_setup():
    """A 24 GHz, 4 GHz-wide sweep with 41 points and a 12 cm, 31-point swing."""
    sweep = make_sweep(24e9, 4e9, 41)
    traj = arm_swing(SwingSpec(0.12, 31))
    return sweep, traj


@pytest.fixture(scope="session")
def point_dataset(small_setup):
    sweep, traj = small_setup
    return acquire([PointScatterer((0.0, 0.10, 0.0))], traj, sweep)


def run_with_threads(code: str, threads: int = 8):
    """Run ``code`` in a fresh interpreter whose numba pool has ``threads`` workers."""
    env = dict(os.environ, NUMBA_NUM_THREADS=str(threads))
    return subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                          text=True, check=True)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
