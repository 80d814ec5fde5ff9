"""End-to-end simulate and image steps shared by the CLI and library callers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .calib import calibrate_phase, estimate_reference_delay, subtract_background
from .config import RunConfig
from .forward import acquire, background_dataset
from .imager import DetectionReport, PSFMetrics, backproject, detect_peak, psf_metrics, to_db
from .motion import arm_swing, crop_aperture
from .scene import AcquisitionDataset, PointScatterer, ReflectivityImage, Trajectory


@dataclass
class Simulation:
    measured: AcquisitionDataset
    background: AcquisitionDataset
    trajectory: Trajectory


@dataclass
class ImagingResult:
    image: ReflectivityImage
    db: np.ndarray
    report: DetectionReport
    reference_delay: float


def _trajectory(cfg: RunConfig) -> Trajectory:
    traj = arm_swing(cfg.swing_spec())
    if cfg.crop_extent is not None:
        traj = crop_aperture(traj, cfg.crop_extent)
    return traj


def simulate(cfg: RunConfig) -> Simulation:
    """Measured (targets + clutter) and background (clutter only) acquisitions."""
    seed_measured, seed_background = (
        int(s) for s in np.random.SeedSequence(cfg.seed).generate_state(2)
    )
    traj = _trajectory(cfg)
    sweep = cfg.sweep()
    clutter = cfg.clutter()
    measured = acquire(cfg.targets() + clutter, traj, sweep, cfg.forward_config(seed_measured))
    background = background_dataset(clutter, traj, sweep, cfg.forward_config(seed_background))
    # the system delay stands in for cables and connectors between VNA and antenna
    delay = float(cfg.raw["system_delay_s"])
    if delay:
        measured = calibrate_phase(measured, -delay)
        background = calibrate_phase(background, -delay)
    return Simulation(measured, background, traj)


def form_image(measured: AcquisitionDataset, background: AcquisitionDataset, cfg: RunConfig,
               workers: Optional[int] = None, threshold_db: Optional[float] = None) -> ImagingResult:
    """Background subtraction, phase calibration, backprojection and detection."""
    data = subtract_background(measured, background)
    cal = cfg.raw["calibration"]
    if cal.get("auto"):
        tau = estimate_reference_delay(data, float(cal["known_range"]))
    else:
        tau = float(cal.get("delay_s") or 0.0)
    data = calibrate_phase(data, tau)
    img = backproject(data, cfg.grid(), taper=cfg.raw["taper"], workers=workers)
    db = to_db(img)
    th = float(cfg.raw["threshold_db"] if threshold_db is None else threshold_db)
    return ImagingResult(img, db, detect_peak(img, th), tau)


def point_spread(cfg: RunConfig, workers: Optional[int] = None) -> PSFMetrics:
    """Resolution of a lone unit scatterer at the configured PSF target."""
    data = acquire([PointScatterer(cfg.psf_target)], _trajectory(cfg), cfg.sweep(),
                   cfg.forward_config(cfg.seed))
    return psf_metrics(data, cfg.psf_grid(), workers=workers)
