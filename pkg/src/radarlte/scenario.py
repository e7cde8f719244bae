"""Orchestration: build a drop, run baseline and radar-interfered uplinks.

A baseline and its interfered counterpart share the layout, the channel
draws and the scheduler state; only the radar grid differs. Every random
draw comes from a stream keyed on the master seed plus fixed labels, so
results do not depend on evaluation order or on which other points of a
sweep are computed.
"""

from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analysis import SweepResult
from .antennas import wrap_deg
from .config import Scenario, resolve, rng_stream, validate
from .coupling import InterferenceGrid, build_interference_grid
from .geometry import NetworkLayout, RadarGeometry, build_layout, radar_geometry
from .lte_uplink import LinkBudget, SinrGrid, ThroughputReport, attach, run_uplink, ue_coupling_loss
from .propagation import radar_path_loss_dB
from .radar_emitter import build_schedule

log = logging.getLogger(__name__)


def prepare(scenario: Scenario) -> Scenario:
    """Resolve derived fields and validate; idempotent."""
    s = resolve(scenario)
    validate(s)
    return s


@dataclass(frozen=True)
class Drop:
    index: int
    layout: NetworkLayout
    budget: LinkBudget


def build_drop(scenario: Scenario, index: int = 0) -> Drop:
    seed = scenario.sim.seed
    lte = scenario.lte
    layout = build_layout(lte, rng_stream(seed, "layout", lte.deployment, index))
    cl = ue_coupling_loss(layout, lte, seed * 1000 + index)
    return Drop(index, layout, attach(cl))


def n_subframes(scenario: Scenario) -> int:
    return int(round(scenario.sim.duration_s * 1e3))


def scan_phase(scenario: Scenario, drop_index: int) -> float:
    r = scenario.radar
    if r.random_scan_phase:
        return float(rng_stream(scenario.sim.seed, "radar_phase", drop_index).uniform(0.0, 360.0))
    return r.scan_phase_deg


@dataclass(frozen=True)
class RadarExposure:
    geometry: RadarGeometry
    path_loss_dB: np.ndarray
    grid: InterferenceGrid


def radar_exposure(scenario: Scenario, drop: Drop) -> RadarExposure:
    r = scenario.radar
    geom = radar_geometry(drop.layout, r.distance_km, r.height_m)
    pl = radar_path_loss_dB(geom.range_km, scenario.propagation)
    n_sf = n_subframes(scenario)
    sched = build_schedule(r, n_sf * 1e-3, scan_phase(scenario, drop.index))
    grid = build_interference_grid(sched, r, scenario.lte, drop.layout, geom, pl, n_sf)
    return RadarExposure(geom, np.asarray(pl), grid)


def default_plot_cell(scenario: Scenario, layout: NetworkLayout) -> int:
    """Centre-site sector facing the radar (macro) or the cell nearest it."""
    if scenario.sim.plot_cell is not None:
        return scenario.sim.plot_cell
    geom = radar_geometry(layout, scenario.radar.distance_km, scenario.radar.height_m)
    if layout.deployment == "macro":
        centre = [c.id for c in layout.cells if c.site == 0]
        off = [abs(float(wrap_deg(layout.cells[i].antenna.boresight_deg
                                  - geom.bearing_to_radar_deg[i]))) for i in centre]
        return centre[int(np.argmin(off))]
    return int(np.argmin(geom.range_km))


def _combine(reports: list[ThroughputReport], meta: dict) -> ThroughputReport:
    return ThroughputReport(
        np.concatenate([r.throughput_bps for r in reports]),
        np.concatenate([r.serving_cell for r in reports]),
        reports[0].duration_s, meta)


def _meta(scenario: Scenario, radar_on: bool) -> dict:
    r, lte = scenario.radar, scenario.lte
    return {
        "deployment": lte.deployment, "seed": scenario.sim.seed, "drops": scenario.sim.drops,
        "duration_s": scenario.sim.duration_s, "radar": radar_on,
        "distance_km": r.distance_km if radar_on else None,
        "freq_offset_MHz": r.freq_offset_MHz if radar_on else None,
        "p0_dBm": lte.link.p0_dBm, "alpha": lte.link.alpha,
    }


def _run(scenario: Scenario, modes, want_sinr: bool = False):
    """Run every drop once per entry of ``modes`` (radar on/off), reusing the drop."""
    scenario = prepare(scenario)
    modes = [m and scenario.radar.enabled for m in modes]
    reports = [[] for _ in modes]
    sinr = [[] for _ in modes]
    for i in range(scenario.sim.drops):
        drop = build_drop(scenario, i)
        cell = default_plot_cell(scenario, drop.layout) if want_sinr else None
        exposure = radar_exposure(scenario, drop) if any(modes) else None
        for j, on in enumerate(modes):
            rep, win = run_uplink(drop.layout, drop.budget, scenario.lte, scenario.sim.duration_s,
                                  exposure.grid if on else None, cell, scenario.sim.sinr_window_s)
            reports[j].append(rep)
            sinr[j].append(win)
    return [(_combine(r, _meta(scenario, on)), w) for r, w, on in zip(reports, sinr, modes)]


def run_single(scenario: Scenario, radar_on: bool, want_sinr: bool = False):
    """One run over all drops. Returns (ThroughputReport, [SinrGrid per drop])."""
    return _run(scenario, [radar_on], want_sinr)[0]


def run_pair(scenario: Scenario, want_sinr: bool = False):
    """(baseline, interfered) reports sharing seed, drops and channel draws.

    With ``want_sinr`` each element is a ``(report, sinr_grids)`` tuple.
    """
    (b, bw), (i, iw) = _run(scenario, [False, True], want_sinr)
    return ((b, bw), (i, iw)) if want_sinr else (b, i)


def _sweep_point(args):
    scenario, key = args
    rep, _ = run_single(scenario, radar_on=True)
    return key, rep


def run_sweep(scenario: Scenario, distances_km=None, freq_offsets_MHz=None, jobs: int = 1):
    """Baseline plus one interfered run per (distance, offset) point.

    Points are independent, so they run in a process pool when ``jobs > 1``.
    Results are keyed, so their order does not depend on completion order.
    """
    scenario = prepare(scenario)
    distances = list(distances_km if distances_km is not None else scenario.sim.distances_km)
    offsets = list(freq_offsets_MHz if freq_offsets_MHz is not None else [scenario.radar.freq_offset_MHz])
    sim = dataclasses.replace(scenario.sim, distances_km=sorted(set(distances) | set(scenario.sim.distances_km)))
    base_scn = dataclasses.replace(scenario, sim=sim)
    baseline, _ = run_single(base_scn, radar_on=False)
    dep = scenario.lte.deployment
    tasks = [(base_scn.with_radar(distance_km=float(d), freq_offset_MHz=float(o)), (float(d), float(o), dep))
             for d in distances for o in offsets]
    result = SweepResult(baseline)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for key, rep in pool.map(_sweep_point, tasks):
                result.entries[key] = rep
    else:
        for t in tasks:
            key, rep = _sweep_point(t)
            result.entries[key] = rep
    return result


__all__ = [
    "Drop", "RadarExposure", "SinrGrid", "build_drop", "default_plot_cell", "n_subframes",
    "prepare", "radar_exposure", "run_pair", "run_single", "run_sweep", "scan_phase",
]
