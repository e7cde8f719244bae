"""Radar pulses to per-eNB interference on the uplink symbol/subcarrier grid.

Radar interference at an eNB factorises into a time part and a frequency
part: every pulse has the same rectangular-pulse spectrum, so the grid is
stored as per-symbol received power times a fixed per-subcarrier fraction.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

from .antennas import radar_tx_gain_dBi, wrap_deg
from .config import LteConfig, RadarConfig
from .geometry import NetworkLayout, RadarGeometry
from .radar_emitter import PulseSchedule


def _sinc2_cdf(f_Hz, tau_s):
    """Fraction of a rectangular pulse's energy below frequency ``f_Hz``,
    measured from the carrier (odd part only; add 0.5 for the full CDF)."""
    x = np.pi * tau_s * np.asarray(f_Hz, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.where(x == 0.0, 0.0, np.sin(x) ** 2 / x)
    return (sici(2.0 * x)[0] - tail) / np.pi


def spectral_fraction(bin_center_offset_Hz, bin_width_Hz, pulse_width_s):
    """Share of a rectangular pulse's energy that falls in one frequency bin.

    The energy density is ``tau * sinc^2(f tau)``; its integral has a closed
    form in the sine integral, so no quadrature is needed.
    """
    if np.any(np.asarray(bin_width_Hz) <= 0) or pulse_width_s <= 0:
        raise ValueError("bin width and pulse width must be > 0")
    lo = np.asarray(bin_center_offset_Hz, dtype=float) - 0.5 * np.asarray(bin_width_Hz)
    hi = lo + np.asarray(bin_width_Hz)
    frac = np.clip(_sinc2_cdf(hi, pulse_width_s) - _sinc2_cdf(lo, pulse_width_s), 0.0, 1.0)
    return frac if frac.ndim else float(frac)


def radar_carrier_offset_Hz(radar: RadarConfig, lte: LteConfig) -> float:
    """Radar carrier relative to the LTE carrier."""
    off = radar.freq_offset_MHz
    if radar.offset_reference == "edge":
        off = lte.bandwidth_MHz / 2.0 + off
    return off * 1e6


def subcarrier_frequencies_Hz(lte: LteConfig) -> np.ndarray:
    """Subcarrier k sits at ``(k - N/2) * spacing``; the band centre is k = N/2."""
    n = lte.n_subcarriers
    return (np.arange(n) - n // 2) * lte.subcarrier_spacing_kHz * 1e3


def spectral_profile(radar: RadarConfig, lte: LteConfig) -> np.ndarray:
    """Fraction of each pulse's energy landing on each LTE subcarrier."""
    f = subcarrier_frequencies_Hz(lte) - radar_carrier_offset_Hz(radar, lte)
    return spectral_fraction(f, lte.subcarrier_spacing_kHz * 1e3, radar.pulse_width_s)


def received_pulse_power_dBm(peak_power_dBm, radar_gain_dBi, insertion_loss_dB,
                             path_loss_dB, bs_gain_dBi, bs_rx_loss_dB=0.0):
    """In-pulse power at the eNB antenna port, all spectral content included."""
    return (np.asarray(peak_power_dBm) + radar_gain_dBi - insertion_loss_dB
            - path_loss_dB + bs_gain_dBi - bs_rx_loss_dB)


def bs_gain_toward_radar(layout: NetworkLayout, geom: RadarGeometry) -> np.ndarray:
    return np.array([
        c.antenna.gain_dBi(geom.bearing_to_radar_deg[i], geom.elevation_to_radar_deg[i])
        for i, c in enumerate(layout.cells)
    ])


def pulse_powers_dBm(schedule: PulseSchedule, radar: RadarConfig, lte: LteConfig,
                     layout: NetworkLayout, geom: RadarGeometry, path_loss_dB) -> np.ndarray:
    """Received in-pulse power, shape (n_pulses, n_cells)."""
    az_off = wrap_deg(geom.azimuth_deg[None, :] - schedule.beam_azimuth_deg[:, None])
    el_off = np.broadcast_to(geom.elevation_deg[None, :], az_off.shape)
    g_tx = radar_tx_gain_dBi(az_off, el_off, radar.antenna_gain_dBi, radar.beamwidth_az_deg,
                             radar.beamwidth_el_deg, radar.backlobe_floor_dB)
    return received_pulse_power_dBm(radar.peak_power_dBm, g_tx, radar.insertion_loss_dB,
                                    np.asarray(path_loss_dB)[None, :],
                                    bs_gain_toward_radar(layout, geom)[None, :], lte.bs_rx_loss_dB)


def uplink_symbol_mask(lte: LteConfig, n_subframes: int) -> np.ndarray:
    """Boolean per absolute symbol: True inside uplink subframes."""
    pattern = np.array([c == "U" for c in lte.tdd_pattern])
    ul_sf = pattern[np.arange(n_subframes) % len(pattern)]
    return np.repeat(ul_sf, lte.symbols_per_subframe)


@dataclass(frozen=True)
class InterferenceGrid:
    """Radar power per eNB, absolute symbol and subcarrier.

    ``symbol_power_mW[c, s]`` is the symbol-averaged received pulse power
    (all spectral content); multiply by ``spectrum[k]`` for one subcarrier.
    """

    symbol_power_mW: np.ndarray  # (n_cells, n_symbols)
    spectrum: np.ndarray  # (n_subcarriers,)
    symbols_per_subframe: int

    @property
    def n_cells(self):
        return self.symbol_power_mW.shape[0]

    @property
    def n_symbols(self):
        return self.symbol_power_mW.shape[1]

    def subframe(self, sf: int) -> np.ndarray:
        """(n_cells, symbols_per_subframe) slice in mW."""
        n = self.symbols_per_subframe
        return self.symbol_power_mW[:, sf * n:(sf + 1) * n]

    def power_mW(self, cell: int, symbols=slice(None)) -> np.ndarray:
        return self.symbol_power_mW[cell, symbols][:, None] * self.spectrum[None, :]

    def power_dBm(self, cell: int, symbols=slice(None)) -> np.ndarray:
        """(symbols, subcarriers) in dBm; -inf where no pulse energy landed."""
        with np.errstate(divide="ignore"):
            return 10.0 * np.log10(self.power_mW(cell, symbols))

    def in_band_power_mW(self, cell: int) -> float:
        return float(self.symbol_power_mW[cell].sum() * self.spectrum.sum())

    @classmethod
    def empty(cls, n_cells, n_symbols, n_subcarriers, symbols_per_subframe=14):
        return cls(np.zeros((n_cells, n_symbols)), np.zeros(n_subcarriers), symbols_per_subframe)


def deposit_pulses(start_s, width_s, power_mW, symbol_s, ul_mask) -> np.ndarray:
    """Spread pulse energy over the symbols it overlaps.

    Each symbol receives ``power * overlap / symbol_s`` so that the
    symbol-averaged power times the symbol length equals the pulse energy
    inside it. Symbols outside the uplink mask receive nothing.
    ``power_mW`` has shape (n_pulses, n_cells); returns (n_cells, n_symbols).
    """
    n_sym = len(ul_mask)
    out = np.zeros((n_sym, power_mW.shape[1]))
    if len(start_s) == 0:
        return out.T.copy()
    t0 = np.asarray(start_s) / symbol_s
    t1 = t0 + width_s / symbol_s
    # snap to the symbol grid so pulses aligned with a boundary do not leak
    t0 = np.where(np.abs(t0 - np.round(t0)) < 1e-7, np.round(t0), t0)
    t1 = np.where(np.abs(t1 - np.round(t1)) < 1e-7, np.round(t1), t1)
    first = np.floor(t0).astype(int)
    span = int(np.ceil(width_s / symbol_s)) + 1
    for j in range(span):
        s = first + j
        overlap = np.clip(np.minimum(t1, s + 1) - np.maximum(t0, s), 0.0, None)
        ok = (overlap > 0) & (s < n_sym)
        ok[ok] &= ul_mask[s[ok]]
        if not np.any(ok):
            continue
        np.add.at(out, s[ok], power_mW[ok] * overlap[ok, None])
    return np.ascontiguousarray(out.T)


def build_interference_grid(schedule: PulseSchedule, radar: RadarConfig, lte: LteConfig,
                            layout: NetworkLayout, geom: RadarGeometry, path_loss_dB,
                            n_subframes: int) -> InterferenceGrid:
    p_dBm = pulse_powers_dBm(schedule, radar, lte, layout, geom, path_loss_dB)
    symbol_s = lte.symbol_duration_s
    energy = deposit_pulses(schedule.start_s, schedule.width_s, 10.0 ** (p_dBm / 10.0),
                            symbol_s, uplink_symbol_mask(lte, n_subframes))
    return InterferenceGrid(energy, spectral_profile(radar, lte), lte.symbols_per_subframe)


def write_grid_csv(grid: InterferenceGrid, cell: int, path, symbols=slice(None)) -> None:
    """Finite entries only, as (subframe, symbol 1-based, subcarrier, dBm)."""
    n = grid.symbols_per_subframe
    idx = np.arange(grid.n_symbols)[symbols]
    p = grid.power_dBm(cell, symbols)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["subframe", "symbol", "subcarrier", "radar_dBm"])
        rows, cols = np.nonzero(np.isfinite(p))
        for r, k in zip(rows, cols):
            s = idx[r]
            w.writerow([s // n, s % n + 1, k, f"{p[r, k]:.4f}"])
