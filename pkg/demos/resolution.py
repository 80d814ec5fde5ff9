"""
Point spread function and resolution
====================================

Range resolution follows the bandwidth, cross-range resolution the aperture.
With a 12 cm aperture at 10 cm the swing also sees the target from wide
angles, which sharpens the range response beyond c / 2B.
"""

from wearsar import PointScatterer, SwingSpec, acquire, arm_swing, make_sweep, psf_metrics
from wearsar.scene import SPEED_OF_LIGHT, ImageGrid

target = (0.0, 0.10, 0.0)
grid = ImageGrid.xy((-0.03, 0.03), (0.005, 0.195), (121, 381))

for length, points in ((0.12, 61), (0.02, 21)):
    traj = arm_swing(SwingSpec(length, points))
    print(f"aperture {length * 100:.0f} cm")
    for bandwidth in (8e9, 4e9, 2e9):
        data = acquire([PointScatterer(target)], traj, make_sweep(24e9, bandwidth, 201))
        m = psf_metrics(data, grid)
        print(f"  B = {bandwidth / 1e9:.0f} GHz: range {m.range_fwhm * 100:5.2f} cm "
              f"(c/2B {SPEED_OF_LIGHT / (2 * bandwidth) * 100:5.2f} cm), "
              f"cross-range {m.crossrange_fwhm * 100:5.2f} cm, PSL {m.peak_sidelobe_db:6.1f} dB")
