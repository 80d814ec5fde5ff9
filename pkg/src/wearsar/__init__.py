"""Wearable short-range SAR imaging: simulation, calibration and backprojection."""

import numba as _numba

# TBB in this toolchain is often too old and only produces a warning
if _numba.config.THREADING_LAYER == "default":
    _numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

from .scene import (  # noqa: E402
    SPEED_OF_LIGHT,
    AcquisitionDataset,
    DomainError,
    FrequencySweep,
    ImageGrid,
    PointScatterer,
    ReflectivityImage,
    Trajectory,
    discretize_plate,
    make_sweep,
    wavenumber,
)
from .motion import SwingSpec, arm_swing, crop_aperture  # noqa: E402
from .forward import AmplitudeModel, ForwardConfig, acquire, background_dataset, monostatic_response  # noqa: E402
from .calib import EstimationError, calibrate_phase, estimate_reference_delay, subtract_background  # noqa: E402
from .imager import DetectionReport, backproject, detect_peak, psf_metrics, to_db  # noqa: E402
from .config import RunConfig  # noqa: E402

__version__ = "0.1.0"
