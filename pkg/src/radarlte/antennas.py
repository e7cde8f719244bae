"""Radar cosine-aperture pattern and eNB sector patterns.

Radar gain is normalised to 0 dB at boresight and built from three pieces:
the cosine-illuminated aperture pattern near boresight, a logarithmic
side-lobe mask, and a constant back-lobe floor. The hand-over angles are
where neighbouring pieces meet, so the curve is continuous.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

MASK_SLOPE_DB = 17.51
MASK_SCALE = 2.33
APERTURE_CONST_DEG = 68.8  # cosine aperture: theta3dB[deg] = 68.8 * wavelength / D


def _aperture_argument(theta_deg, theta3dB_deg):
    return APERTURE_CONST_DEG * np.pi * np.sin(np.radians(theta_deg)) / theta3dB_deg


def radar_theoretical_gain_dB(theta_deg, theta3dB_deg=0.81):
    """Cosine-aperture power pattern in dB, 0 dB at boresight."""
    mu = np.asarray(_aperture_argument(theta_deg, theta3dB_deg), dtype=float)
    denom = 1.0 - (2.0 * mu / np.pi) ** 2
    near_pole = np.abs(denom) < 1e-9
    safe = np.where(near_pole, 1.0, denom)
    amplitude = np.where(near_pole, np.pi / 4.0, np.cos(mu) / safe)
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(np.abs(amplitude))


def radar_mask_gain_dB(theta_deg, theta3dB_deg=0.81):
    with np.errstate(divide="ignore"):
        return -MASK_SLOPE_DB * np.log(MASK_SCALE * np.abs(theta_deg) / theta3dB_deg)


@functools.lru_cache(maxsize=64)
def radar_transition_angles(theta3dB_deg=0.81, floor_dB=-50.0):
    """Angles (deg) where the pattern hands over to the mask and to the floor.

    The first is the point past the half-power width where the aperture
    pattern drops below the mask for good (about -14.4 dB for the default
    beam); the second solves mask == floor in closed form.
    """

    def excess(t):
        return float(radar_theoretical_gain_dB(t, theta3dB_deg) - radar_mask_gain_dB(t, theta3dB_deg))

    first_null = np.degrees(np.arcsin(min(1.0, 1.5 * theta3dB_deg / APERTURE_CONST_DEG)))
    grid = np.linspace(theta3dB_deg / 2.0, first_null * (1 - 1e-9), 4001)
    values = np.array([excess(t) for t in grid])
    drops = np.nonzero((values[:-1] > 0) & (values[1:] <= 0))[0]
    if drops.size == 0:
        raise ValueError(f"no pattern/mask crossing for theta3dB={theta3dB_deg}")
    i = drops[0]
    theta_m = brentq(excess, grid[i], grid[i + 1], xtol=1e-12)
    theta_f = theta3dB_deg / MASK_SCALE * np.exp(-floor_dB / MASK_SLOPE_DB)
    return float(theta_m), float(theta_f)


def radar_normalized_gain_dB(theta_deg, theta3dB_deg=0.81, floor_dB=-50.0):
    """Normalised radar gain (dB) versus off-boresight angle in degrees."""
    theta = np.abs(np.asarray(theta_deg, dtype=float))
    theta_m, theta_f = radar_transition_angles(float(theta3dB_deg), float(floor_dB))
    gain = np.full(theta.shape, floor_dB)
    main = theta <= theta_m
    side = (theta > theta_m) & (theta <= theta_f)
    gain[main] = radar_theoretical_gain_dB(theta[main], theta3dB_deg)
    gain[side] = radar_mask_gain_dB(theta[side], theta3dB_deg)
    gain = np.maximum(gain, floor_dB)
    return gain if gain.ndim else float(gain)


def radar_tx_gain_dBi(az_off_deg, el_off_deg, boresight_gain_dBi=45.0,
                      theta3dB_az_deg=0.81, theta3dB_el_deg=0.81, floor_dB=-50.0):
    """Radar transmit gain toward a direction offset in azimuth and elevation.

    The two planes add in dB; the sum is floored jointly at the back-lobe level.
    """
    rel = (radar_normalized_gain_dB(az_off_deg, theta3dB_az_deg, floor_dB)
           + radar_normalized_gain_dB(el_off_deg, theta3dB_el_deg, floor_dB))
    return boresight_gain_dBi + np.maximum(rel, floor_dB)


def sector_plane_gain_dB(angle_deg, tilt_deg, theta3dB_deg, am_dB=20.0):
    """Parabolic single-plane attenuation, capped at ``am_dB``."""
    x = (np.asarray(angle_deg, dtype=float) - tilt_deg) / theta3dB_deg
    return -np.minimum(12.0 * x * x, am_dB)


def wrap_deg(angle):
    """Wrap to [-180, 180)."""
    return (np.asarray(angle) + 180.0) % 360.0 - 180.0


@dataclass(frozen=True)
class SectorAntenna:
    max_gain_dBi: float
    boresight_deg: float = 0.0
    theta3dB_az_deg: float = 70.0
    theta3dB_el_deg: float = 10.0
    downtilt_deg: float = 12.0
    am_dB: float = 20.0
    omni_azimuth: bool = False
    omni_elevation: bool = False

    def composite_gain_dB(self, az_deg, el_deg):
        """Relative gain toward absolute bearing ``az_deg`` and elevation ``el_deg``.

        ``el_deg`` is positive above the horizon; downtilt points the beam below it.
        """
        return composite_gain_dB(az_deg, el_deg, self)

    def gain_dBi(self, az_deg, el_deg):
        return self.max_gain_dBi + self.composite_gain_dB(az_deg, el_deg)


def composite_gain_dB(az_deg, el_deg, antenna: SectorAntenna):
    if antenna.omni_azimuth:
        g_az = np.zeros(np.shape(az_deg))
    else:
        g_az = sector_plane_gain_dB(wrap_deg(np.asarray(az_deg) - antenna.boresight_deg), 0.0,
                                    antenna.theta3dB_az_deg, antenna.am_dB)
    if antenna.omni_elevation:
        g_el = np.zeros(np.shape(el_deg))
    else:
        # depression angle against downtilt
        g_el = sector_plane_gain_dB(-np.asarray(el_deg, dtype=float), antenna.downtilt_deg,
                                    antenna.theta3dB_el_deg, antenna.am_dB)
    out = -np.minimum(-(g_az + g_el), antenna.am_dB)
    return out if np.ndim(out) else float(out)
