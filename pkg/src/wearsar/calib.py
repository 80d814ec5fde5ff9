"""Pre-imaging corrections: background subtraction and system-delay calibration."""

from __future__ import annotations

from typing import Optional

import numpy as np
from scipy import optimize

from .scene import SPEED_OF_LIGHT, AcquisitionDataset, DomainError


class EstimationError(DomainError):
    """The data do not support a reliable delay estimate."""


def check_same_geometry(a: AcquisitionDataset, b: AcquisitionDataset) -> None:
    if a.shape != b.shape:
        raise DomainError(f"dataset shapes differ: {a.shape} vs {b.shape}")
    fa, fb = a.sweep.frequencies, b.sweep.frequencies
    if np.any(np.abs(fa - fb) > 1e-9 * np.abs(fb)):
        raise DomainError("datasets were acquired on different frequency sweeps")
    if np.any(np.abs(a.trajectory.positions - b.trajectory.positions) > 1e-9):
        raise DomainError("datasets were acquired along different trajectories")


def subtract_background(measured: AcquisitionDataset, background: AcquisitionDataset) -> AcquisitionDataset:
    """Remove a target-free reference acquisition, sample by sample."""
    check_same_geometry(measured, background)
    return measured.with_samples(measured.samples - background.samples)


def calibrate_phase(data: AcquisitionDataset, reference_delay: float) -> AcquisitionDataset:
    """
    Remove a common system delay: S[m, n] * exp(+2j*pi*f_m*tau).

    Passing ``-tau`` applies the delay instead, which is how cable paths are
    simulated.
    """
    if not np.isfinite(reference_delay):
        raise DomainError("reference_delay must be finite")
    if reference_delay == 0:
        return data
    f = data.sweep.frequencies
    return data.with_samples(data.samples * np.exp(2j * np.pi * f * reference_delay)[:, None])


def _profile(samples_m: np.ndarray, f: np.ndarray, delays: np.ndarray) -> np.ndarray:
    return np.exp(2j * np.pi * np.outer(delays, f)) @ samples_m


def estimate_reference_delay(data: AcquisitionDataset, known_range: float, *,
                             window: Optional[float] = None,
                             min_contrast_db: float = 6.0) -> float:
    """
    Heuristic system-delay estimate from a dominant reflector at ``known_range``.

    ``known_range`` is measured from the antenna position nearest the
    trajectory centroid; that position's range profile is searched for the
    round-trip delay of the reflector, and the excess over ``2 R / c`` is the
    system delay. The search spans ``[-window/2, window/2]`` around zero
    excess (default: the unambiguous delay span ``1/df``), first on a grid of
    a quarter resolution cell, then refined by golden-section search.

    Raises EstimationError when the position-averaged range profile has no
    peak at least ``min_contrast_db`` above its median power.
    """
    f = data.sweep.frequencies
    if f.size < 2:
        raise DomainError("delay estimation needs at least two frequencies")
    if window is None:
        window = 1.0 / np.min(np.diff(f))
    base = 2 * known_range / SPEED_OF_LIGHT
    step = 1.0 / (4 * (f[-1] - f[0]))
    taus = np.arange(-window / 2, window / 2 + step / 2, step)

    power = np.mean(np.abs(_profile(data.samples, f, base + taus)) ** 2, axis=1)
    median = np.median(power)
    if not power.max() > 0 or 10 * np.log10(power.max() / max(median, 1e-300)) < min_contrast_db:
        raise EstimationError("no range-profile peak stands out from the background")

    pos = data.trajectory.positions
    n_ref = int(np.argmin(np.linalg.norm(pos - pos.mean(axis=0), axis=1)))
    s_ref = data.samples[:, n_ref]
    coarse = np.abs(_profile(s_ref, f, base + taus))
    i = int(np.argmax(coarse))
    if i in (0, taus.size - 1):
        return float(taus[i])

    def sharpness(tau):
        return -abs(_profile(s_ref, f, np.array([base + tau]))[0])

    res = optimize.minimize_scalar(sharpness, bracket=(taus[i - 1], taus[i], taus[i + 1]),
                                   method="golden", tol=1e-10)
    return float(res.x)
