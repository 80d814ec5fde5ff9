"""
On-disk formats.

Dataset: ``<stem>.json`` header + ``<stem>.bin`` payload. The header holds
the sweep, trajectory, seed and provenance; the payload is the M x N sample
matrix as little-endian complex128 (interleaved float64 real/imag pairs),
row-major with the frequency index m outermost. Floats in the header are
written with ``repr`` precision so every value reads back bit-exactly.

Trajectory: CSV with columns ``n,x,y,z`` (meters).

Image: CSV matrix of dB values (row i = axis-1 pixel, column j = axis-2
pixel) and an 8-bit binary PGM with range increasing upwards.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional

import numpy as np

from .scene import AcquisitionDataset, DomainError, FrequencySweep, Trajectory

FORMAT_NAME = "wearsar-dataset"
FORMAT_VERSION = 1
_DTYPES = {"<c16": np.dtype("<c16"), "<c8": np.dtype("<c8")}


class DatasetFormatError(DomainError):
    """A dataset file is missing, truncated or inconsistent."""


def _stem(path) -> Path:
    p = Path(path)
    return p.with_suffix("") if p.suffix in (".json", ".bin") else p


def write_dataset(path, data: AcquisitionDataset, *, kind: str = "measured",
                  seed: Optional[int] = None, provenance: Optional[dict] = None,
                  dtype: str = "<c16") -> Path:
    """Write ``data`` next to ``path``; returns the header path."""
    stem = _stem(path)
    stem.parent.mkdir(parents=True, exist_ok=True)
    header_path, bin_path = stem.with_suffix(".json"), stem.with_suffix(".bin")
    header = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": kind,
        "shape": list(data.shape),
        "dtype": dtype,
        "order": "m-major",
        "data_file": bin_path.name,
        "seed": seed,
        "provenance": provenance or {},
        "frequencies_hz": [float(f) for f in data.sweep.frequencies],
        "positions_m": [[float(v) for v in p] for p in data.trajectory.positions],
    }
    header_path.write_text(json.dumps(header, indent=1) + "\n")
    bin_path.write_bytes(np.ascontiguousarray(data.samples, dtype=_DTYPES[dtype]).tobytes())
    return header_path


def read_header(path) -> dict:
    header_path = _stem(path).with_suffix(".json")
    try:
        header = json.loads(header_path.read_text())
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(f"{header_path}: not valid JSON ({exc})") from None
    if header.get("format") != FORMAT_NAME:
        raise DatasetFormatError(f"{header_path}: not a {FORMAT_NAME} header")
    return header


def read_dataset(path) -> AcquisitionDataset:
    header_path = _stem(path).with_suffix(".json")
    header = read_header(header_path)
    try:
        m, n = header["shape"]
        dtype = _DTYPES[header.get("dtype", "<c16")]
        raw = (header_path.parent / header["data_file"]).read_bytes()
        sweep = FrequencySweep(np.array(header["frequencies_hz"], dtype=float))
        traj = Trajectory(np.array(header["positions_m"], dtype=float).reshape(-1, 3))
    except (KeyError, ValueError, TypeError) as exc:
        raise DatasetFormatError(f"{header_path}: malformed header ({exc})") from None
    if len(raw) != m * n * dtype.itemsize:
        raise DatasetFormatError(f"{header_path}: payload holds {len(raw)} bytes, expected "
                                 f"{m * n * dtype.itemsize}")
    samples = np.frombuffer(raw, dtype=dtype).reshape(m, n).astype(np.complex128)
    return AcquisitionDataset(sweep, traj, samples)


def write_trajectory_csv(path, traj: Trajectory) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "x", "y", "z"])
        for n, (x, y, z) in enumerate(traj.positions):
            w.writerow([n, repr(float(x)), repr(float(y)), repr(float(z))])
    return path


def read_trajectory_csv(path) -> Trajectory:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            try:
                rows.append((int(row["n"]), float(row["x"]), float(row["y"]), float(row["z"])))
            except (KeyError, TypeError, ValueError):
                raise DatasetFormatError(f"{path}: malformed trajectory row {row!r}") from None
    rows.sort()
    return Trajectory(np.array([r[1:] for r in rows]).reshape(-1, 3))


def write_image_csv(path, db: np.ndarray) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in np.asarray(db, dtype=float):
            w.writerow([repr(float(v)) for v in row])
    return path


def read_image_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        return np.array([[float(v) for v in row] for row in csv.reader(fh) if row])


def write_pgm(path, db: np.ndarray, dynamic_range_db: float = 40.0) -> Path:
    """Grayscale view: 0 dB is white, ``-dynamic_range_db`` and below black."""
    scaled = np.clip(1 + np.asarray(db, dtype=float) / dynamic_range_db, 0, 1)
    pix = np.rint(scaled * 255).astype(np.uint8)
    # rows: axis 2 (range) from far to near; columns: axis 1 (cross-range)
    pix = np.ascontiguousarray(pix.T[::-1])
    h, w = pix.shape
    path = Path(path)
    path.write_bytes(f"P5\n{w} {h}\n255\n".encode() + pix.tobytes())
    return path
