"""Rotating radar: stepped beam positions and the pulse train.

The beam steps through ``beam_positions`` azimuths per rotation, each held
for ``dwell_s = rotation_period / beam_positions``. Pulses form one
continuous train at the PRI, independent of dwell boundaries; a pulse
belongs to the dwell in which it starts. With the default numbers the
dwell (4.494 ms) is slightly shorter than nine PRIs, so most dwells hold
nine pulse starts and a few hold eight.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .antennas import wrap_deg
from .config import RadarConfig


@dataclass(frozen=True)
class PulseEvent:
    start_s: float
    width_s: float
    beam_azimuth_deg: float
    eirp_dBm: float
    dwell: int


@dataclass(frozen=True)
class PulseSchedule:
    """Column-oriented pulse train; iterate to get :class:`PulseEvent` rows."""

    start_s: np.ndarray
    dwell: np.ndarray  # absolute dwell index (not wrapped per rotation)
    beam_azimuth_deg: np.ndarray
    width_s: float
    eirp_dBm: float
    beam_positions: int

    def __len__(self):
        return len(self.start_s)

    def __iter__(self):
        for t, d, az in zip(self.start_s, self.dwell, self.beam_azimuth_deg):
            yield PulseEvent(float(t), self.width_s, float(az), self.eirp_dBm, int(d))

    def pulses_per_dwell(self) -> np.ndarray:
        """Pulse count of every dwell that starts inside the schedule."""
        if len(self.dwell) == 0:
            return np.zeros(0, dtype=int)
        return np.bincount(self.dwell, minlength=int(self.dwell.max()) + 1)


def _pulse_count(duration_s: float, pri_s: float, offset_s: float) -> int:
    # pulses start at offset + k*pri < duration; the epsilon absorbs float noise
    return max(0, math.ceil((duration_s - offset_s) / pri_s - 1e-9))


def dwell_index(t_s, cfg: RadarConfig):
    """Absolute dwell index at time ``t_s`` (not wrapped per rotation)."""
    x = np.asarray(t_s, dtype=float) / cfg.dwell_s
    snapped = np.where(np.abs(x - np.round(x)) < 1e-9, np.round(x), x)
    return np.floor(snapped).astype(int)


def beam_azimuth_at(t_s, cfg: RadarConfig, scan_phase_deg: float | None = None):
    """Stepped beam azimuth (deg) relative to the radar-to-network line."""
    if np.any(np.asarray(t_s) < 0):
        raise ValueError("time must be >= 0")
    phase = cfg.scan_phase_deg if scan_phase_deg is None else scan_phase_deg
    k = dwell_index(t_s, cfg) % cfg.beam_positions
    az = wrap_deg(k * cfg.beamwidth_az_deg + phase)
    return az if np.ndim(az) else float(az)


def build_schedule(cfg: RadarConfig, duration_s: float, scan_phase_deg: float | None = None):
    """All pulses starting in ``[0, duration_s)``, time-ordered."""
    if duration_s <= 0:
        raise ValueError("duration must be > 0")
    n = _pulse_count(duration_s, cfg.pri_s, cfg.timing_offset_s)
    start = cfg.timing_offset_s + np.arange(n) * cfg.pri_s
    return PulseSchedule(
        start_s=start,
        dwell=dwell_index(start, cfg),
        beam_azimuth_deg=np.asarray(beam_azimuth_at(start, cfg, scan_phase_deg), dtype=float),
        width_s=cfg.pulse_width_s,
        eirp_dBm=cfg.eirp_dBm,
        beam_positions=cfg.beam_positions,
    )


def dwells_illuminating(bs_azimuth_deg: float, footprint_angle_rad: float, cfg: RadarConfig,
                        scan_phase_deg: float | None = None) -> list[int]:
    """Dwell indices (within one rotation) whose beam centre lies within half
    the footprint angle of the given azimuth."""
    phase = cfg.scan_phase_deg if scan_phase_deg is None else scan_phase_deg
    k = np.arange(cfg.beam_positions)
    centres = k * cfg.beamwidth_az_deg + phase
    half = np.degrees(footprint_angle_rad) / 2.0
    hit = np.abs(wrap_deg(centres - bs_azimuth_deg)) <= half + 1e-12
    return [int(i) for i in k[hit]]


def write_schedule_csv(schedule: PulseSchedule, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["start_s", "width_s", "dwell", "beam_azimuth_deg"])
        for t, d, az in zip(schedule.start_s, schedule.dwell, schedule.beam_azimuth_deg):
            w.writerow([f"{t:.9f}", f"{schedule.width_s:.9g}", int(d), f"{az:.6f}"])
