"""Walk through the radar side of the link: pattern, timing and path loss.

Run with ``python demos/01_radar_and_propagation.py``. Nothing is written
to disk; everything prints to the terminal.
"""

import numpy as np

from radarlte.antennas import radar_normalized_gain_dB, radar_transition_angles
from radarlte.config import RadarConfig, load_scenario
from radarlte.propagation import fspl_dB, itm_apm_loss_dB, los_horizon_km, radar_path_loss_dB
from radarlte.radar_emitter import build_schedule

radar = RadarConfig()

# The radar beam is a cosine main lobe that hands over to a side-lobe mask and
# then to a flat back lobe. The two hand-over angles follow from the beamwidth.
theta_m, theta_f = radar_transition_angles(radar.beamwidth_az_deg, -50.0)
print(f"main lobe ends at {theta_m:.3f} deg, back lobe starts at {theta_f:.3f} deg")
for a in (0.0, 0.405, 0.81, 2.0, 5.0, 10.0, 90.0):
    print(f"  {a:6.3f} deg  {float(radar_normalized_gain_dB(a)):7.2f} dB")

# One rotation of the antenna. Beam positions are spaced by the beamwidth, and
# the pulse train runs without gaps, so a few dwells end up one pulse short.
sched = build_schedule(radar, radar.rotation_period_s)
ppd = sched.pulses_per_dwell()
print(f"\nrotation {radar.rotation_period_s:.3f} s, dwell {radar.dwell_s * 1e3:.3f} ms, "
      f"{len(sched)} pulses over {ppd.size} dwells")
print("pulses per dwell:", dict(zip(*[x.tolist() for x in np.unique(ppd, return_counts=True)])))

# Path loss toward the two LTE deployments. Free space holds until the radio
# horizon; past it the area-mode terrain model takes over and grows quickly.
for text, name in (("", "macro"), ("lte: {deployment: small_cell}", "small cell")):
    prop = load_scenario(text).propagation
    h = los_horizon_km(prop.tx_height_m, prop.rx_height_m)
    print(f"\n{name}: horizon {h:.2f} km")
    print("   km    FSPL     ITM    used")
    for d in (10.0, 30.0, 50.0, 100.0, 150.0, 200.0):
        print(f"  {d:4.0f}  {float(fspl_dB(prop.frequency_MHz, d)):6.1f}  "
              f"{float(itm_apm_loss_dB(d, prop)):6.1f}  {float(radar_path_loss_dB(d, prop)):6.1f}")
