"""
Run configuration for the command-line tools.

A config file is one JSON document; any key left out takes the default
below, which reproduces the reference wearable-radar experiment: 24 GHz
centre, 4 GHz bandwidth, 3201 frequencies, a 12 cm arm swing and a
10 x 10 cm metal plate 10 cm away.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .forward import ForwardConfig
from .motion import SwingSpec
from .scene import (
    DomainError,
    FrequencySweep,
    ImageGrid,
    PointScatterer,
    default_plate_spacing,
    discretize_plate,
    make_sweep,
)


class ConfigError(DomainError):
    """The configuration document is malformed or out of range."""


DEFAULTS: dict = {
    "seed": 0,
    "out": "out",
    "sweep": {"center_hz": 24e9, "bandwidth_hz": 4e9, "count": 3201},
    "swing": {
        "aperture_length": 0.12,
        "point_count": 61,
        "standoff": 0.0,
        "jitter_std": 0.0,
        "drift_rate": 0.0,
        "seed": None,
    },
    "crop_extent": None,
    "scene": {
        "plates": [
            {"center": [0.0, 0.10, 0.0], "width": 0.10, "height": 0.10,
             "reflectivity": 1.0, "spacing": None},
        ],
        "points": [],
        "clutter": [
            {"position": [-0.13, 0.17, 0.02], "reflectivity": 0.5},
            {"position": [0.12, 0.05, -0.03], "reflectivity": [0.0, 0.3]},
        ],
    },
    "forward": {"amplitude_model": "phase-only", "noise_snr_db": None,
                "pattern_exponent": None},
    "system_delay_s": 0.0,
    "calibration": {"delay_s": 0.0, "auto": False, "known_range": 0.10},
    "grid": {"x": [-0.15, 0.15], "y": [0.02, 0.20], "shape": [256, 256], "z": 0.0},
    "psf": {"target": [0.0, 0.10, 0.0], "x": [-0.02, 0.02], "y": [0.03, 0.17],
            "shape": [161, 281], "z": 0.0},
    "threshold_db": -6.0,
    "taper": None,
}


def _merge(base: dict, override: dict, where: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if key not in base:
            raise ConfigError(f"unknown config key {where}{key!r}")
        if isinstance(base[key], dict) and isinstance(value, dict):
            out[key] = _merge(base[key], value, f"{where}{key}.")
        else:
            out[key] = value
    return out


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError(f"complex value must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _grid(spec: dict) -> ImageGrid:
    return ImageGrid.xy(tuple(spec["x"]), tuple(spec["y"]), tuple(spec["shape"]),
                        z=float(spec.get("z", 0.0)))


@dataclass
class RunConfig:
    raw: dict = field(default_factory=lambda: copy.deepcopy(DEFAULTS))

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        cfg = cls(_merge(DEFAULTS, doc))
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(doc)

    def to_json(self) -> str:
        return json.dumps(self.raw, indent=1)

    def validate(self) -> None:
        """Build every sub-spec once so bad values surface as ConfigError."""
        try:
            self.sweep()
            self.swing_spec()
            self.targets()
            self.clutter()
            self.forward_config(0)
            self.grid()
            self.psf_grid()
            if not float(self.raw["threshold_db"]) < 0:
                raise DomainError("threshold_db must be negative")
            if self.raw["taper"] not in (None, "hann"):
                raise DomainError(f"unknown taper {self.raw['taper']!r}")
            if not np.isfinite(float(self.raw["system_delay_s"])):
                raise DomainError("system_delay_s must be finite")
        except ConfigError:
            raise
        except (DomainError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid config: {exc}") from None

    @property
    def seed(self) -> int:
        return int(self.raw["seed"])

    def sweep(self) -> FrequencySweep:
        s = self.raw["sweep"]
        return make_sweep(float(s["center_hz"]), float(s["bandwidth_hz"]), int(s["count"]))

    def swing_spec(self) -> SwingSpec:
        s = dict(self.raw["swing"])
        if s.get("seed") is None:
            s["seed"] = self.seed
        return SwingSpec(**s)

    def targets(self) -> list[PointScatterer]:
        scene = self.raw["scene"]
        out: list[PointScatterer] = []
        for plate in scene["plates"]:
            spacing = plate.get("spacing") or default_plate_spacing(self.sweep())
            out += discretize_plate(plate["center"], plate["width"], plate["height"],
                                    spacing, _complex(plate.get("reflectivity", 1.0)))
        for pt in scene["points"]:
            out.append(PointScatterer(pt["position"], _complex(pt.get("reflectivity", 1.0))))
        return out

    def clutter(self) -> list[PointScatterer]:
        return [PointScatterer(c["position"], _complex(c.get("reflectivity", 1.0)))
                for c in self.raw["scene"]["clutter"]]

    def forward_config(self, seed: int) -> ForwardConfig:
        f = self.raw["forward"]
        return ForwardConfig(amplitude_model=f["amplitude_model"],
                             noise_snr_db=f["noise_snr_db"], seed=seed,
                             pattern_exponent=f["pattern_exponent"])

    def grid(self) -> ImageGrid:
        return _grid(self.raw["grid"])

    def psf_grid(self) -> ImageGrid:
        return _grid(self.raw["psf"])

    @property
    def psf_target(self) -> np.ndarray:
        return np.asarray(self.raw["psf"]["target"], dtype=float)

    @property
    def crop_extent(self) -> Optional[float]:
        c = self.raw["crop_extent"]
        return None if c is None else float(c)
