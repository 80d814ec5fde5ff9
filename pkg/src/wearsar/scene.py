"""
Scene description: point targets, frequency sweeps, antenna trajectories,
acquisition datasets and image grids.

Coordinates are right-handed, in meters:
    x  cross-range (direction of the arm swing)
    y  range (towards the target)
    z  vertical
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact


class DomainError(ValueError):
    """Raised when an input falls outside the domain of an operation."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def _vec3(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise DomainError(f"{name} must be a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{name} has non-finite components")
    return _frozen(v)


@dataclass(frozen=True)
class PointScatterer:
    position: np.ndarray
    reflectivity: complex = 1.0 + 0j

    def __post_init__(self):
        object.__setattr__(self, "position", _vec3(self.position, "position"))
        rho = complex(self.reflectivity)
        if not np.isfinite(rho):
            raise DomainError("reflectivity must be finite")
        object.__setattr__(self, "reflectivity", rho)


@dataclass(frozen=True, eq=False)
class FrequencySweep:
    """Stepped frequencies (Hz) of an SFCW acquisition."""

    frequencies: np.ndarray

    def __post_init__(self):
        f = np.atleast_1d(np.asarray(self.frequencies, dtype=float))
        if f.ndim != 1 or f.size < 1:
            raise DomainError("a sweep needs at least one frequency")
        if not np.all(np.isfinite(f)) or np.any(f <= 0):
            raise DomainError("frequencies must be finite and positive")
        if np.any(np.diff(f) <= 0):
            raise DomainError("frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies", _frozen(f))

    def __len__(self):
        return self.frequencies.size

    @property
    def wavenumbers(self) -> np.ndarray:
        return wavenumber(self.frequencies)

    @property
    def bandwidth(self) -> float:
        return float(self.frequencies[-1] - self.frequencies[0])

    @property
    def center(self) -> float:
        return float(0.5 * (self.frequencies[0] + self.frequencies[-1]))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Ordered antenna phase-centre positions, shape (N, 3)."""

    positions: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.positions, dtype=float)
        if p.ndim == 1 and p.size == 3:
            p = p[None, :]
        if p.ndim != 2 or p.shape[1] != 3 or p.shape[0] < 1:
            raise DomainError(f"positions must have shape (N>=1, 3), got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise DomainError("positions must be finite")
        object.__setattr__(self, "positions", _frozen(p))

    def __len__(self):
        return self.positions.shape[0]


@dataclass(frozen=True, eq=False)
class AcquisitionDataset:
    """Complex samples S[m, n] for frequency m and antenna position n."""

    sweep: FrequencySweep
    trajectory: Trajectory
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        shape = (len(self.sweep), len(self.trajectory))
        if s.shape != shape:
            raise DomainError(f"samples shape {s.shape} does not match (M, N) = {shape}")
        if not np.all(np.isfinite(s)):
            raise DomainError("samples must be finite")
        object.__setattr__(self, "samples", _frozen(s))

    @property
    def shape(self):
        return self.samples.shape

    def with_samples(self, samples) -> "AcquisitionDataset":
        return AcquisitionDataset(self.sweep, self.trajectory, samples)


@dataclass(frozen=True, eq=False)
class ImageGrid:
    """
    Planar grid of pixel centres.

    Pixel ``(i, j)`` sits at ``origin + i*pitch[0]*axis1 + j*pitch[1]*axis2``
    where ``pitch = extent / (count - 1)``; the first and last pixel centres
    along an axis are therefore ``extent`` apart. A single-pixel axis sits
    at the origin and its pitch is taken to be the extent.
    """

    origin: np.ndarray
    axis1: np.ndarray
    axis2: np.ndarray
    extent: tuple
    shape: tuple

    def __post_init__(self):
        object.__setattr__(self, "origin", _vec3(self.origin, "origin"))
        a1 = _vec3(self.axis1, "axis1")
        a2 = _vec3(self.axis2, "axis2")
        if abs(np.linalg.norm(a1) - 1) > 1e-9 or abs(np.linalg.norm(a2) - 1) > 1e-9:
            raise DomainError("grid axes must be unit vectors")
        if abs(a1 @ a2) > 1e-9:
            raise DomainError("grid axes must be orthogonal")
        object.__setattr__(self, "axis1", a1)
        object.__setattr__(self, "axis2", a2)
        w, h = (float(e) for e in self.extent)
        if not (w > 0 and h > 0):
            raise DomainError("grid extents must be positive")
        p1, p2 = (int(n) for n in self.shape)
        if p1 < 1 or p2 < 1:
            raise DomainError("grid needs at least one pixel per axis")
        object.__setattr__(self, "extent", (w, h))
        object.__setattr__(self, "shape", (p1, p2))

    @classmethod
    def xy(cls, x_range, y_range, shape, z: float = 0.0) -> "ImageGrid":
        """Horizontal grid spanning ``x_range`` (cross-range) by ``y_range`` (range)."""
        (x0, x1), (y0, y1) = x_range, y_range
        return cls(
            origin=(x0, y0, z),
            axis1=(1.0, 0.0, 0.0),
            axis2=(0.0, 1.0, 0.0),
            extent=(x1 - x0, y1 - y0),
            shape=shape,
        )

    @property
    def pitch(self) -> tuple:
        return tuple(e / (n - 1) if n > 1 else e for e, n in zip(self.extent, self.shape))

    def axis_coords(self):
        """Offsets of pixel centres from the origin along each axis."""
        return tuple(np.arange(n) * p for n, p in zip(self.shape, self.pitch))

    def pixel_position(self, i: int, j: int) -> np.ndarray:
        return self.origin + i * self.pitch[0] * self.axis1 + j * self.pitch[1] * self.axis2

    def pixel_positions(self) -> np.ndarray:
        """All pixel centres, shape (P1, P2, 3)."""
        u, v = self.axis_coords()
        return (
            self.origin
            + u[:, None, None] * self.axis1
            + v[None, :, None] * self.axis2
        )

    def nearest_pixel(self, point) -> tuple:
        rel = np.asarray(point, dtype=float) - self.origin
        idx = []
        for axis, pitch, n in zip((self.axis1, self.axis2), self.pitch, self.shape):
            k = int(np.rint(rel @ axis / pitch)) if n > 1 else 0
            idx.append(min(max(k, 0), n - 1))
        return tuple(idx)

    def translated(self, offset) -> "ImageGrid":
        return ImageGrid(self.origin + np.asarray(offset, float), self.axis1, self.axis2,
                         self.extent, self.shape)


@dataclass(frozen=True, eq=False)
class ReflectivityImage:
    grid: ImageGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.grid.shape:
            raise DomainError(f"image shape {v.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


def wavenumber(freq):
    """Free-space wavenumber 2*pi*f/c in rad/m."""
    f = np.asarray(freq, dtype=float)
    if np.any(f <= 0):
        raise DomainError("frequency must be positive")
    k = 2 * np.pi * f / SPEED_OF_LIGHT
    return float(k) if k.ndim == 0 else k


def make_sweep(center_freq: float, bandwidth: float, count: int) -> FrequencySweep:
    """
    Uniform stepped-frequency sweep over [center - B/2, center + B/2].

    A single-point sweep sits at the centre frequency.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    if bandwidth < 0:
        raise DomainError("bandwidth must be non-negative")
    f_lo = center_freq - bandwidth / 2
    if f_lo <= 0:
        raise DomainError(f"lowest sweep frequency {f_lo} Hz is not positive")
    if count == 1:
        return FrequencySweep(np.array([float(center_freq)]))
    if bandwidth == 0:
        raise DomainError("zero bandwidth only admits a single frequency")
    return FrequencySweep(np.linspace(f_lo, center_freq + bandwidth / 2, count))


def default_plate_spacing(sweep: FrequencySweep) -> float:
    """Quarter of the shortest wavelength in the sweep."""
    return SPEED_OF_LIGHT / sweep.frequencies[-1] / 4


def discretize_plate(center, width: float, height: float, spacing: float,
                     reflectivity: complex = 1.0) -> list[PointScatterer]:
    """
    Sample a flat plate facing the aperture broadside (plate spans x and z).

    Points lie on a regular grid no coarser than ``spacing``, mirror-symmetric
    about ``center``, with the outermost rows on the plate edges. The total
    ``reflectivity`` is shared equally between points. A plate smaller than
    ``spacing`` collapses to a single point at its centre.
    """
    if not (width > 0 and height > 0 and spacing > 0):
        raise DomainError("width, height and spacing must be positive")
    center = np.asarray(center, dtype=float)

    def offsets(size):
        if spacing >= size:
            return np.zeros(1)
        n = int(np.ceil(size / spacing - 1e-9)) + 1
        step = size / (n - 1)
        return (np.arange(n) - (n - 1) / 2) * step

    xs, zs = offsets(width), offsets(height)
    rho = complex(reflectivity) / (xs.size * zs.size)
    return [
        PointScatterer(center + np.array([dx, 0.0, dz]), rho)
        for dx in xs
        for dz in zs
    ]


def scatterer_arrays(scatterers: Sequence[PointScatterer]):
    """Stack scatterers into ``(positions (T, 3), reflectivities (T,))``."""
    if len(scatterers) == 0:
        return np.zeros((0, 3)), np.zeros(0, dtype=complex)
    pos = np.stack([s.position for s in scatterers])
    rho = np.array([s.reflectivity for s in scatterers], dtype=complex)
    return pos, rho
