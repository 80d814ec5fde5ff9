"""Synthetic monostatic SFCW acquisitions of point-scatterer scenes."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .scene import (
    AcquisitionDataset,
    DomainError,
    FrequencySweep,
    PointScatterer,
    Trajectory,
    scatterer_arrays,
)


class AmplitudeModel(str, Enum):
    PHASE_ONLY = "phase-only"
    SPHERICAL_SPREADING = "spherical-spreading"


@dataclass(frozen=True)
class ForwardConfig:
    """
    amplitude_model : phase-only (unit magnitude) or 1/(4 pi d)^2 spreading
    noise_snr_db : complex white Gaussian noise at this SNR, relative to the
        mean sample power; None disables noise
    seed : noise generator seed
    pattern_exponent : optional cos^q(theta) two-way taper about +y boresight
    """

    amplitude_model: AmplitudeModel = AmplitudeModel.PHASE_ONLY
    noise_snr_db: Optional[float] = None
    seed: int = 0
    pattern_exponent: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "amplitude_model", AmplitudeModel(self.amplitude_model))
        if self.noise_snr_db is not None and not np.isfinite(self.noise_snr_db):
            raise DomainError("noise_snr_db must be finite")


def _amplitude(d, model: AmplitudeModel):
    if model is AmplitudeModel.SPHERICAL_SPREADING:
        return 1.0 / (4 * np.pi * d) ** 2
    return 1.0


def monostatic_response(scatterer: PointScatterer, position, k: float,
                        amplitude_model=AmplitudeModel.PHASE_ONLY) -> complex:
    """Echo of one scatterer seen from ``position`` at wavenumber ``k``."""
    d = float(np.linalg.norm(scatterer.position - np.asarray(position, dtype=float)))
    if d == 0:
        raise DomainError("antenna position coincides with a scatterer")
    amp = _amplitude(d, AmplitudeModel(amplitude_model))
    return complex(scatterer.reflectivity * amp * np.exp(-2j * k * d))


def acquire(scatterers: Sequence[PointScatterer], traj: Trajectory,
            sweep: FrequencySweep, cfg: ForwardConfig = ForwardConfig()) -> AcquisitionDataset:
    """
    Simulate S[m, n] = sum_t rho_t * a(d_tn) * exp(-2j k_m d_tn).

    Scatterers are accumulated one at a time in list order.
    """
    k = sweep.wavenumbers
    ant = traj.positions
    pos, rho = scatterer_arrays(scatterers)
    samples = np.zeros((k.size, ant.shape[0]), dtype=complex)
    for p, r in zip(pos, rho):
        delta = p - ant
        d = np.sqrt(np.einsum("ij,ij->i", delta, delta))
        if np.any(d == 0):
            raise DomainError(f"antenna position {int(np.argmin(d))} coincides with a scatterer")
        weight = r * _amplitude(d, cfg.amplitude_model)
        if cfg.pattern_exponent is not None:
            cos_theta = np.clip(delta[:, 1] / d, 0.0, None)
            weight = weight * cos_theta ** (2 * cfg.pattern_exponent)
        samples += weight * np.exp(-2j * np.outer(k, d))

    if cfg.noise_snr_db is not None:
        samples = samples + complex_noise(samples, cfg.noise_snr_db, cfg.seed)
    return AcquisitionDataset(sweep, traj, samples)


def background_dataset(clutter: Sequence[PointScatterer], traj: Trajectory,
                       sweep: FrequencySweep, cfg: ForwardConfig = ForwardConfig()) -> AcquisitionDataset:
    """Target-free reference acquisition of the static clutter."""
    return acquire(clutter, traj, sweep, cfg)


def complex_noise(samples: np.ndarray, snr_db: float, seed: int) -> np.ndarray:
    """Circular white Gaussian noise scaled to ``snr_db`` below the mean sample power."""
    rng = np.random.default_rng(seed)
    signal_power = np.mean(np.abs(samples) ** 2)
    noise_power = signal_power / 10 ** (snr_db / 10)
    shape = samples.shape
    return np.sqrt(noise_power / 2) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
