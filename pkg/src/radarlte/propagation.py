"""Radar-to-eNB path loss: free space inside the radio horizon, ITM beyond."""

from __future__ import annotations

import csv
import functools

import numpy as np

from .config import SITING, PropagationConfig
from .itm import AreaModel, AreaParams, Climate, Variability


def fspl_dB(frequency_MHz, distance_km):
    """Free-space loss with frequency in MHz and distance in km."""
    f = np.asarray(frequency_MHz, dtype=float)
    d = np.asarray(distance_km, dtype=float)
    if np.any(f <= 0) or np.any(d <= 0):
        raise ValueError("frequency and distance must be positive")
    out = 20.0 * np.log10(f) + 20.0 * np.log10(d) + 32.45
    return out if out.ndim else float(out)


def los_horizon_km(h_tx_m: float, h_rx_m: float) -> float:
    """Radio horizon under the 4/3-earth approximation."""
    if h_tx_m < 0 or h_rx_m < 0:
        raise ValueError("antenna heights must be >= 0")
    return 4.1 * (np.sqrt(h_tx_m) + np.sqrt(h_rx_m))


def _area_params(prop: PropagationConfig) -> AreaParams:
    if None in (prop.frequency_MHz, prop.tx_height_m, prop.rx_height_m, prop.terrain_roughness_m):
        raise ValueError("propagation config is not resolved; call config.resolve first")
    return AreaParams(
        frequency_MHz=prop.frequency_MHz,
        tx_height_m=prop.tx_height_m,
        rx_height_m=prop.rx_height_m,
        terrain_irregularity_m=prop.terrain_roughness_m,
        dielectric=prop.dielectric,
        conductivity_S_m=prop.conductivity_S_m,
        refractivity_N=prop.refractivity_N,
        climate=Climate[prop.climate.upper()],
        polarization=0 if prop.polarization == "horizontal" else 1,
        tx_siting=SITING[prop.tx_siting],
        rx_siting=SITING[prop.rx_siting],
        variability=Variability[prop.variability.upper()],
    )


@functools.lru_cache(maxsize=32)
def _model(params: AreaParams) -> AreaModel:
    return AreaModel(params)


def itm_apm_loss_dB(distance_km, prop: PropagationConfig):
    """Median ITM area-mode transmission loss (dB). Valid for 1-2000 km."""
    model = _model(_area_params(prop))
    pct = (prop.time_pct, prop.location_pct, prop.confidence_pct)
    d = np.atleast_1d(np.asarray(distance_km, dtype=float))
    out = np.array([model.loss_db(float(x), *pct) for x in d])
    return out if np.ndim(distance_km) else float(out[0])


def radar_path_loss_dB(distance_km, prop: PropagationConfig):
    """FSPL inside the horizon, else the larger of FSPL and ITM.

    Taking the maximum keeps the curve monotone where ITM would dip below
    free space just past the horizon.
    """
    d = np.atleast_1d(np.asarray(distance_km, dtype=float))
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    horizon = los_horizon_km(prop.tx_height_m, prop.rx_height_m)
    free = fspl_dB(prop.frequency_MHz, d)
    out = np.array(free, dtype=float, ndmin=1)
    beyond = d >= horizon
    if np.any(beyond):
        out[beyond] = np.maximum(out[beyond], itm_apm_loss_dB(d[beyond], prop))
    return out if np.ndim(distance_km) else float(out[0])


def write_loss_curve_csv(prop: PropagationConfig, distances_km, path) -> None:
    """Columns: distance_km, fspl_dB, itm_dB, selected_dB, region."""
    horizon = los_horizon_km(prop.tx_height_m, prop.rx_height_m)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["distance_km", "fspl_dB", "itm_dB", "selected_dB", "region"])
        for d in distances_km:
            w.writerow([
                f"{d:.6g}", f"{fspl_dB(prop.frequency_MHz, d):.4f}",
                f"{itm_apm_loss_dB(d, prop):.4f}", f"{radar_path_loss_dB(d, prop):.4f}",
                "los" if d < horizon else "nlos",
            ])
