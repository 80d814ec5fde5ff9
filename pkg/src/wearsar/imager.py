"""
Sum-and-delay backprojection for monostatic stepped-frequency data,
plus dB conversion, peak detection and point-spread-function analysis.

For every pixel r' the image is

    rho(r') = sum_n sum_m S[m, n] * exp(+2j * k_m * |r' - r_n|)

with no amplitude weighting. The compiled kernel splits the work across
pixels only, so images are bit-identical for any worker count.
"""

from __future__ import annotations

import cmath
import contextlib
from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from .scene import (
    AcquisitionDataset,
    DomainError,
    ImageGrid,
    ReflectivityImage,
)

DB_FLOOR = -120.0
# tolerated phase error (rad) from advancing the uniform-sweep phasor
_PHASE_TOL = 1e-11


class GridBoundaryError(DomainError):
    """The image peak lies on the edge of the grid."""


@dataclass(frozen=True)
class DetectionReport:
    peak_index: tuple
    peak_position: np.ndarray
    peak_magnitude_db: float
    extent_x: float
    extent_axis2: float
    threshold_db: float

    @property
    def peak_range(self) -> float:
        return float(self.peak_position[1])

    def to_dict(self) -> dict:
        return {
            "peak_index": [int(i) for i in self.peak_index],
            "peak_position": [float(v) for v in self.peak_position],
            "peak_magnitude_db": float(self.peak_magnitude_db),
            "extent_x": float(self.extent_x),
            "extent_axis2": float(self.extent_axis2),
            "threshold_db": float(self.threshold_db),
        }


@contextlib.contextmanager
def _num_threads(workers: Optional[int]):
    if workers is None:
        yield
        return
    workers = max(1, min(int(workers), numba.config.NUMBA_NUM_THREADS))
    previous = numba.get_num_threads()
    numba.set_num_threads(workers)
    try:
        yield
    finally:
        numba.set_num_threads(previous)


def hann_weights(data: AcquisitionDataset) -> np.ndarray:
    """Separable Hann taper over frequency and aperture, shape (M, N)."""
    m, n = data.shape
    wm = np.hanning(m + 2)[1:-1] if m > 1 else np.ones(1)
    wn = np.hanning(n + 2)[1:-1] if n > 1 else np.ones(1)
    return np.outer(wm, wn)


def _check_clearance(antennas: np.ndarray, pixels: np.ndarray, shape) -> None:
    for n, a in enumerate(antennas):
        d2 = np.einsum("ij,ij->i", pixels - a, pixels - a)
        hit = np.flatnonzero(d2 == 0)
        if hit.size:
            i, j = np.unravel_index(hit[0], shape)
            raise DomainError(f"pixel ({i}, {j}) coincides with antenna position {n}")


def _uniform_step(k: np.ndarray, max_distance: float) -> Optional[float]:
    """Wavenumber step if the sweep is uniform enough for phasor recursion."""
    if k.size == 1:
        return 0.0
    dk = (k[-1] - k[0]) / (k.size - 1)
    resid = np.max(np.abs(k - (k[0] + np.arange(k.size) * dk)))
    if 2 * resid * max_distance > _PHASE_TOL:
        return None
    return float(dk)


def backproject(data: AcquisitionDataset, grid: ImageGrid, *, taper: Optional[str] = None,
                workers: Optional[int] = None) -> ReflectivityImage:
    """
    Form the complex reflectivity image of ``data`` on ``grid``.

    Parameters
    ----------
    taper : None or "hann"
        Optional separable Hann weighting of the samples.
    workers : int, optional
        Number of threads for the pixel loop; defaults to numba's setting.
    """
    samples = np.asarray(data.samples)
    if taper == "hann":
        samples = samples * hann_weights(data)
    elif taper is not None:
        raise DomainError(f"unknown taper {taper!r}")
    k = np.ascontiguousarray(data.sweep.wavenumbers)
    antennas = np.ascontiguousarray(data.trajectory.positions)
    pixels = np.ascontiguousarray(grid.pixel_positions().reshape(-1, 3))
    _check_clearance(antennas, pixels, grid.shape)

    corners = np.array([grid.pixel_position(i, j)
                        for i in (0, grid.shape[0] - 1) for j in (0, grid.shape[1] - 1)])
    max_d = np.max(np.linalg.norm(corners[:, None, :] - antennas[None], axis=-1))
    dk = _uniform_step(k, max_d)

    s_nm = np.ascontiguousarray(samples.T, dtype=np.complex128)
    out = np.empty(pixels.shape[0], dtype=np.complex128)
    from . import _kernels

    with _num_threads(workers):
        if dk is not None:
            _kernels.backproject_uniform(s_nm, float(k[0]), dk, antennas, pixels, out)
        else:
            _kernels.backproject_general(s_nm, k, antennas, pixels, out)
    return ReflectivityImage(grid, out.reshape(grid.shape))


def backproject_naive(data: AcquisitionDataset, grid: ImageGrid) -> ReflectivityImage:
    """Plain-Python triple loop, kept as a slow reference for the kernel."""
    s = data.samples
    k = [float(v) for v in data.sweep.wavenumbers]
    ants = [tuple(map(float, a)) for a in data.trajectory.positions]
    p1, p2 = grid.shape
    out = np.zeros((p1, p2), dtype=complex)
    for i in range(p1):
        for j in range(p2):
            r = grid.pixel_position(i, j)
            acc = 0j
            for n, a in enumerate(ants):
                d = ((r[0] - a[0]) ** 2 + (r[1] - a[1]) ** 2 + (r[2] - a[2]) ** 2) ** 0.5
                if d == 0:
                    raise DomainError(f"pixel ({i}, {j}) coincides with antenna position {n}")
                for m, km in enumerate(k):
                    acc += complex(s[m, n]) * cmath.exp(2j * km * d)
            out[i, j] = acc
    return ReflectivityImage(grid, out)


def to_db(img: ReflectivityImage) -> np.ndarray:
    """Magnitude in dB relative to the image maximum; zeros map to -120 dB."""
    mag = np.abs(img.values)
    peak = mag.max()
    if peak == 0:
        raise DomainError("empty image: all pixels are zero")
    with np.errstate(divide="ignore"):
        db = 20 * np.log10(mag / peak)
    return np.maximum(db, DB_FLOOR)


def _run_length(mask_line: np.ndarray, center: int) -> int:
    lo = center
    while lo > 0 and mask_line[lo - 1]:
        lo -= 1
    hi = center
    while hi < mask_line.size - 1 and mask_line[hi + 1]:
        hi += 1
    return hi - lo + 1


def detect_peak(img: ReflectivityImage, threshold_db: float = -6.0) -> DetectionReport:
    """
    Locate the brightest pixel and measure the above-threshold run through it.

    Extents are the pixel count of the contiguous run along each grid axis
    times the pixel pitch. Ties at the maximum go to the lowest flat index.
    """
    if not threshold_db < 0:
        raise DomainError("threshold_db must be negative")
    db = to_db(img)
    flat = int(np.argmax(np.abs(img.values)))
    i, j = np.unravel_index(flat, img.grid.shape)
    above = db >= threshold_db
    p1, p2 = img.grid.pitch
    return DetectionReport(
        peak_index=(int(i), int(j)),
        peak_position=img.grid.pixel_position(i, j),
        peak_magnitude_db=float(db[i, j]),
        extent_x=_run_length(above[:, j], i) * p1,
        extent_axis2=_run_length(above[i, :], j) * p2,
        threshold_db=float(threshold_db),
    )


def _crossing_width(cut_db: np.ndarray, center: int, level: float, pitch: float) -> float:
    """Width between the interpolated ``level`` crossings either side of ``center``."""
    def side(step):
        idx = center
        while True:
            nxt = idx + step
            if nxt < 0 or nxt >= cut_db.size:
                raise GridBoundaryError("main lobe runs off the grid; enlarge the grid")
            if cut_db[nxt] < level:
                frac = (cut_db[idx] - level) / (cut_db[idx] - cut_db[nxt])
                return (idx - center + step * frac) * step
            idx = nxt

    return (side(-1) + side(+1)) * pitch


def _first_minimum_offset(cut_db: np.ndarray, center: int) -> int:
    """Larger of the distances (pixels) from the peak to the first minimum on each side."""
    lo = center
    while lo > 0 and cut_db[lo - 1] <= cut_db[lo]:
        lo -= 1
    hi = center
    while hi < cut_db.size - 1 and cut_db[hi + 1] <= cut_db[hi]:
        hi += 1
    return max(center - lo, hi - center, 1)


def peak_sidelobe_db(db: np.ndarray, peak: tuple) -> float:
    """
    Highest image level outside the main lobe.

    The main lobe is approximated by the ellipse through the first minima of
    the two axis cuts; everything else, including off-axis artifacts from
    irregular sampling, counts as sidelobe.
    """
    i, j = peak
    a = _first_minimum_offset(db[:, j], i)
    b = _first_minimum_offset(db[i, :], j)
    ii, jj = np.ogrid[: db.shape[0], : db.shape[1]]
    main = ((ii - i) / a) ** 2 + ((jj - j) / b) ** 2 < 1
    outside = db[~main]
    return float(outside.max()) if outside.size else DB_FLOOR


@dataclass(frozen=True)
class PSFMetrics:
    range_fwhm: float
    crossrange_fwhm: float
    peak_sidelobe_db: float

    def __iter__(self):
        return iter((self.range_fwhm, self.crossrange_fwhm, self.peak_sidelobe_db))


def psf_metrics(data: AcquisitionDataset, grid: ImageGrid, *, level_db: float = -6.0,
                workers: Optional[int] = None, image: Optional[ReflectivityImage] = None
                ) -> PSFMetrics:
    """
    Resolution widths and peak sidelobe of a single point-target image.

    Widths are measured through the peak at ``level_db`` on the 20*log10
    magnitude scale (half amplitude by default), with linear interpolation
    of the crossings; cross-range runs along grid axis 1 and range along
    axis 2. The sidelobe level comes from :func:`peak_sidelobe_db`.
    Raises GridBoundaryError if the peak or its main lobe touches the grid
    edge.
    """
    img = image if image is not None else backproject(data, grid, workers=workers)
    db = to_db(img)
    i, j = np.unravel_index(int(np.argmax(np.abs(img.values))), grid.shape)
    if i in (0, grid.shape[0] - 1) or j in (0, grid.shape[1] - 1):
        raise GridBoundaryError(f"peak at grid boundary pixel ({i}, {j}); enlarge the grid")
    p1, p2 = grid.pitch
    cross = _crossing_width(db[:, j], i, level_db, p1)
    rng = _crossing_width(db[i, :], j, level_db, p2)
    psl = peak_sidelobe_db(db, (i, j))
    return PSFMetrics(range_fwhm=rng, crossrange_fwhm=cross, peak_sidelobe_db=psl)


def default_scene_grid(shape=(256, 256)) -> ImageGrid:
    """Default scene grid: x in [-0.15, 0.15] m, y in [0.02, 0.20] m."""
    return ImageGrid.xy((-0.15, 0.15), (0.02, 0.20), shape)
