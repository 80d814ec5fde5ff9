"""Compiled per-pixel backprojection loops.

Each pixel is accumulated by one thread in a fixed (position-outer,
frequency-inner) order, so results do not depend on the thread count.
"""

import numba
import numpy as np


@numba.njit(parallel=True, cache=True)
def backproject_uniform(samples_nm, k0, dk, antennas, pixels, out):
    # k_m = k0 + m*dk: the phase factor is advanced by a complex rotation
    n_pix = pixels.shape[0]
    n_pos, n_freq = samples_nm.shape
    for p in numba.prange(n_pix):
        px = pixels[p, 0]
        py = pixels[p, 1]
        pz = pixels[p, 2]
        acc = 0j
        for n in range(n_pos):
            dx = px - antennas[n, 0]
            dy = py - antennas[n, 1]
            dz = pz - antennas[n, 2]
            d = np.sqrt(dx * dx + dy * dy + dz * dz)
            phasor = np.exp(2j * k0 * d)
            rot = np.exp(2j * dk * d)
            for m in range(n_freq):
                acc += samples_nm[n, m] * phasor
                phasor *= rot
        out[p] = acc


@numba.njit(parallel=True, cache=True)
def backproject_general(samples_nm, k, antennas, pixels, out):
    n_pix = pixels.shape[0]
    n_pos, n_freq = samples_nm.shape
    for p in numba.prange(n_pix):
        px = pixels[p, 0]
        py = pixels[p, 1]
        pz = pixels[p, 2]
        acc = 0j
        for n in range(n_pos):
            dx = px - antennas[n, 0]
            dy = py - antennas[n, 1]
            dz = pz - antennas[n, 2]
            d = np.sqrt(dx * dx + dy * dy + dz * dz)
            for m in range(n_freq):
                acc += samples_nm[n, m] * np.exp(2j * k[m] * d)
        out[p] = acc
