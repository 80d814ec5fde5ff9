"""Antenna radiation figures: efficiency, front-to-back ratio, bandwidth, directivity."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .scene import DomainError

# slack for gain/directivity pairs rounded to 0.01 dB
_GAIN_TOL_DB = 0.05


@dataclass(frozen=True, eq=False)
class PatternCut:
    """
    One radiation-pattern cut.

    angles : degrees in [-180, 180], strictly increasing
    levels : power per unit solid angle, linear scale
    """

    angles: np.ndarray
    levels: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        lv = np.asarray(self.levels, dtype=float)
        if a.ndim != 1 or a.shape != lv.shape:
            raise DomainError("angles and levels must be 1-D arrays of equal length")
        if a.size < 8:
            raise DomainError("a pattern cut needs at least 8 samples")
        if np.any(np.diff(a) <= 0) or a[0] < -180 or a[-1] > 180:
            raise DomainError("angles must increase strictly within [-180, 180]")
        if np.any(lv < 0) or not np.all(np.isfinite(lv)):
            raise DomainError("levels must be finite and non-negative")
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "levels", lv)

    @classmethod
    def from_db(cls, angles, levels_db) -> "PatternCut":
        return cls(angles, 10 ** (np.asarray(levels_db, dtype=float) / 10))

    @classmethod
    def from_csv(cls, path) -> "PatternCut":
        """Read ``angle_deg, level_db`` rows; a non-numeric first row is a header."""
        rows = []
        with open(Path(path), newline="") as fh:
            for k, row in enumerate(csv.reader(fh)):
                if not row or all(not c.strip() for c in row):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError):
                    if k == 0:
                        continue
                    raise DomainError(f"{path}: malformed row {k + 1}: {row!r}") from None
        if not rows:
            raise DomainError(f"{path}: no pattern samples")
        a, db = np.array(rows).T
        return cls.from_db(a, db)

    def _periodic(self):
        # fold onto [0, 360) and pad one period either side for interpolation
        a = np.mod(self.angles, 360.0)
        order = np.argsort(a, kind="stable")
        a, lv = a[order], self.levels[order]
        keep = np.concatenate([[True], np.diff(a) > 0])
        a, lv = a[keep], lv[keep]
        return np.concatenate([a - 360, a, a + 360]), np.tile(lv, 3)

    def level_at(self, angle: float) -> float:
        """Level at ``angle`` (degrees), interpolated linearly in dB."""
        a, lv = self._periodic()
        t = np.mod(angle, 360.0)
        hit = np.flatnonzero(a == t)
        if hit.size:
            return float(lv[hit[0]])
        i = int(np.searchsorted(a, t)) - 1
        a0, a1, l0, l1 = a[i], a[i + 1], lv[i], lv[i + 1]
        w = (t - a0) / (a1 - a0)
        if l0 == 0 or l1 == 0:
            return float(l0 + w * (l1 - l0))
        return float(10 ** ((1 - w) * np.log10(l0) + w * np.log10(l1)))


def efficiency(gain_dbi: float, directivity_db: float) -> float:
    """Radiation efficiency in percent, 100 * 10**((G - D) / 10), capped at 100."""
    if gain_dbi > directivity_db + _GAIN_TOL_DB:
        raise DomainError(f"gain {gain_dbi} dBi exceeds directivity {directivity_db} dB")
    return float(min(100.0, 100.0 * 10 ** ((gain_dbi - directivity_db) / 10)))


def ftbr(cut: PatternCut) -> float:
    """Front-to-back ratio 10*log10(level(0 deg) / level(180 deg)) in dB."""
    front = cut.level_at(0.0)
    back = cut.level_at(180.0)
    if back == 0:
        raise DomainError("back-lobe level is zero; front-to-back ratio is infinite")
    if front == 0:
        raise DomainError("boresight level is zero")
    return float(10 * np.log10(front / back))


def fractional_bandwidth(f_low: float, f_high: float) -> float:
    """Band width over band centre, in percent."""
    if not 0 < f_low < f_high:
        raise DomainError("need 0 < f_low < f_high")
    return 100.0 * (f_high - f_low) / ((f_high + f_low) / 2)


def half_power_beamwidth(cut: PatternCut) -> float:
    """-3 dB beamwidth of the main lobe around the cut maximum, in degrees."""
    a, lv = cut._periodic()
    n = lv.size // 3
    peak = n + int(np.argmax(lv[n:2 * n]))
    with np.errstate(divide="ignore"):
        db = 10 * np.log10(lv / lv[peak])

    def edge(step):
        i = peak
        while abs(i - peak) < n:
            j = i + step
            if db[j] < -3.0:
                w = (db[i] + 3.0) / (db[i] - db[j]) if np.isfinite(db[j]) else 0.0
                return abs(a[i] + w * (a[j] - a[i]) - a[peak])
            i = j
        raise DomainError("pattern never falls 3 dB below its maximum")

    width = edge(-1) + edge(+1)
    if width >= 360:
        raise DomainError("half-power beamwidth is undeterminable")
    return float(width)


def directivity_from_cuts(cut_e: PatternCut, cut_h: PatternCut) -> float:
    """
    Approximate directivity in dB from two orthogonal cuts,
    D ~ 4*pi / (theta_E * theta_H) with half-power beamwidths in radians.
    """
    th_e = np.radians(half_power_beamwidth(cut_e))
    th_h = np.radians(half_power_beamwidth(cut_h))
    return float(10 * np.log10(4 * np.pi / (th_e * th_h)))
