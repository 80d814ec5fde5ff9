"""
Antenna figures of merit
========================

Efficiency from gain and directivity, front-to-back ratio from a pattern
cut, and the matched fractional bandwidth.
"""

import numpy as np

from wearsar.radmetrics import PatternCut, directivity_from_cuts, efficiency, fractional_bandwidth, ftbr

# antenna alone, then backed by a reflecting surface
print(f"efficiency {efficiency(6.73, 6.74):.1f}%  and  {efficiency(4.13, 4.26):.1f}%")
print(f"fractional bandwidth {fractional_bandwidth(23.2e9, 24.8e9):.2f}%")

# cardioid-like cut with a power front/back ratio of 36.1
angles = np.arange(-180.0, 180.0, 2.0)
r = np.sqrt(36.1)
cut = PatternCut(angles, ((r + 1) / 2 + (r - 1) / 2 * np.cos(np.radians(angles))) ** 2)
print(f"FTBR {ftbr(cut):.2f} dB")
print(f"directivity estimate {directivity_from_cuts(cut, cut):.2f} dB")
