"""Body-motion apertures: arm-swing trajectories and tracker-drift models."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .scene import DomainError, Trajectory

# relative slack when comparing a window's extent to the crop limit,
# so that e.g. 60 steps of 2 mm still fit in 12 cm
_EXTENT_RTOL = 1e-12


@dataclass(frozen=True)
class SwingSpec:
    """
    Parameters of a single arm swing.

    aperture_length : nominal swing length along x (m)
    point_count : number of recorded positions
    standoff : distance from the swing line to the scene origin along y (m);
        the swing runs at ``y = -standoff`` so that targets keep their
        scene coordinates
    jitter_std : per-axis Gaussian irregularity of the hand position (m)
    drift_rate : tracker bias accumulated per meter of path (m/m)
    seed : generator seed
    """

    aperture_length: float = 0.12
    point_count: int = 61
    standoff: float = 0.0
    jitter_std: float = 0.0
    drift_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.aperture_length > 0:
            raise DomainError("aperture_length must be positive")
        if self.point_count < 1:
            raise DomainError("point_count must be >= 1")
        if self.jitter_std < 0 or self.drift_rate < 0:
            raise DomainError("jitter_std and drift_rate must be non-negative")


def nominal_positions(spec: SwingSpec) -> np.ndarray:
    n = spec.point_count
    pos = np.zeros((n, 3))
    if n > 1:
        step = spec.aperture_length / (n - 1)
        pos[:, 0] = (np.arange(n) - (n - 1) / 2) * step
    pos[:, 1] = -spec.standoff
    return pos


def arm_swing(spec: SwingSpec) -> Trajectory:
    """
    Irregular swing along x.

    Each nominal position gets independent Gaussian jitter on all three axes
    plus a random-walk bias whose per-step increment is Gaussian with std
    ``drift_rate * step_length``. The same SwingSpec always gives the same result.
    """
    rng = np.random.default_rng(spec.seed)
    pos = nominal_positions(spec)
    n = spec.point_count
    jitter = rng.standard_normal((n, 3))
    steps = rng.standard_normal((n, 3))
    if spec.jitter_std > 0:
        pos = pos + spec.jitter_std * jitter
    if spec.drift_rate > 0 and n > 1:
        step_len = spec.aperture_length / (n - 1)
        steps[0] = 0.0
        pos = pos + np.cumsum(spec.drift_rate * step_len * steps, axis=0)
    return Trajectory(pos)


def _x_of(traj) -> np.ndarray:
    p = traj.positions if isinstance(traj, Trajectory) else np.asarray(traj, dtype=float)
    if p.size == 0:
        raise DomainError("cannot crop an empty trajectory")
    return np.asarray(p).reshape(-1, 3)[:, 0]


def crop_window(traj, max_extent: float) -> tuple[int, int]:
    """
    ``(start, stop)`` of the longest contiguous run whose x-extent fits in
    ``max_extent``; ties go to the earliest start.
    """
    if not max_extent > 0:
        raise DomainError("max_extent must be positive")
    x = _x_of(traj)
    limit = max_extent * (1 + _EXTENT_RTOL)
    lo_q: deque = deque()  # indices with increasing x
    hi_q: deque = deque()  # indices with decreasing x
    best = (0, 1)
    start = 0
    for stop, xi in enumerate(x):
        while lo_q and x[lo_q[-1]] >= xi:
            lo_q.pop()
        lo_q.append(stop)
        while hi_q and x[hi_q[-1]] <= xi:
            hi_q.pop()
        hi_q.append(stop)
        while x[hi_q[0]] - x[lo_q[0]] > limit:
            start += 1
            if lo_q[0] < start:
                lo_q.popleft()
            if hi_q[0] < start:
                hi_q.popleft()
        if stop + 1 - start > best[1] - best[0]:
            best = (start, stop + 1)
    return best


def crop_aperture(traj, max_extent: float) -> Trajectory:
    """Keep the longest consistent stretch of the swing (see :func:`crop_window`)."""
    start, stop = crop_window(traj, max_extent)
    p = traj.positions if isinstance(traj, Trajectory) else np.asarray(traj, float).reshape(-1, 3)
    return Trajectory(p[start:stop])
