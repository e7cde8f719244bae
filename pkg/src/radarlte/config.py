"""Scenario configuration: dataclasses, text parsing, validation, seeding.

Scenario files are YAML mappings with four sections (``radar``, ``lte``,
``propagation``, ``sim``). Every field has a default, so an empty file is a
valid macro-cell scenario. Unknown keys are rejected so that typos do not
silently fall back to defaults.
"""

from __future__ import annotations

import dataclasses
import math
import typing
import zlib
from dataclasses import dataclass, field

import numpy as np
import yaml

DEPLOYMENTS = ("macro", "small_cell")


class ScenarioError(ValueError):
    """Invalid scenario content. ``field`` is the dotted path at fault."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class ScenarioParseError(ScenarioError):
    pass


@dataclass
class RadarConfig:
    enabled: bool = True
    peak_power_dBm: float = 83.0
    antenna_gain_dBi: float = 45.0
    insertion_loss_dB: float = 2.0
    pri_s: float = 0.5e-3
    pulse_width_s: float = 78e-6
    rotation_rpm: float = 30.0
    beamwidth_az_deg: float = 0.81
    beamwidth_el_deg: float = 0.81
    scan_deg: float = 360.0
    height_m: float = 50.0
    frequency_MHz: float = 3500.0
    distance_km: float = 50.0
    freq_offset_MHz: float = 0.0
    # "center": radar carrier minus LTE carrier; "edge": offset past the LTE band edge
    offset_reference: str = "center"
    backlobe_floor_dB: float = -50.0
    footprint_angle_rad: float = 0.03
    scan_phase_deg: float = 0.0
    random_scan_phase: bool = False
    timing_offset_s: float = 0.0

    @property
    def rotation_period_s(self) -> float:
        return 60.0 / self.rotation_rpm

    @property
    def beam_positions(self) -> int:
        # tolerance keeps e.g. 360/0.9 = 400 from rounding up to 401
        return math.ceil(self.scan_deg / self.beamwidth_az_deg - 1e-9)

    @property
    def dwell_s(self) -> float:
        return self.rotation_period_s / self.beam_positions

    @property
    def duty_cycle(self) -> float:
        return self.pulse_width_s / self.pri_s

    @property
    def eirp_dBm(self) -> float:
        return self.peak_power_dBm + self.antenna_gain_dBi - self.insertion_loss_dB


@dataclass
class MacroConfig:
    sites: int = 7
    sectors: int = 3
    isd_m: float = 500.0
    sector_boresights_deg: list[float] = field(default_factory=lambda: [30.0, 150.0, 270.0])
    height_m: float = 25.0
    gain_dBi: float = 17.0
    downtilt_deg: float = 12.0
    theta3dB_az_deg: float = 70.0
    theta3dB_el_deg: float = 10.0
    am_dB: float = 20.0
    tx_power_dBm: float = 46.0
    ue_per_cell: int = 10
    indoor_fraction: float = 0.8
    min_ue_distance_m: float = 25.0


@dataclass
class SmallCellConfig:
    per_macro_cell: int = 4
    height_m: float = 10.0
    gain_dBi: float = 5.0
    # True: flat in both planes. False: flat azimuth, elevation per the sector formula.
    omni_elevation: bool = True
    downtilt_deg: float = 12.0
    theta3dB_el_deg: float = 10.0
    am_dB: float = 20.0
    tx_power_dBm: float = 30.0
    ue_per_cell: int = 30
    indoor_fraction: float = 0.2
    min_ue_distance_m: float = 5.0
    min_separation_m: float = 40.0
    min_macro_distance_m: float = 75.0
    ue_drop_radius_m: float = 40.0


@dataclass
class LinkConfig:
    """Power control and link-to-system mapping constants."""

    p0_dBm: float = -85.0
    alpha: float = 0.8
    eesm_beta: float = 1.0
    efficiency: float = 0.75
    max_spectral_efficiency: float = 6.0
    min_sinr_dB: float = -7.0


@dataclass
class LteConfig:
    deployment: str = "macro"
    carrier_MHz: float = 3500.0
    bandwidth_MHz: float = 20.0
    n_rb: int = 100
    subcarriers_per_rb: int = 12
    subcarrier_spacing_kHz: float = 15.0
    symbols_per_subframe: int = 14
    tdd_pattern: str = "UUUDD"
    ue_max_power_dBm: float = 23.0
    ue_antenna_gain_dBi: float = 0.0
    ue_height_m: float = 1.5
    ue_speed_kmh: float = 3.0
    ue_noise_figure_dB: float = 9.0
    bs_noise_figure_dB: float = 5.0
    thermal_noise_dBm_Hz: float = -174.0
    bs_rx_loss_dB: float = 0.0
    indoor_loss_dB: float = 20.0
    shadowing: bool = True
    macro: MacroConfig = field(default_factory=MacroConfig)
    small_cell: SmallCellConfig = field(default_factory=SmallCellConfig)
    link: LinkConfig = field(default_factory=LinkConfig)

    @property
    def n_subcarriers(self) -> int:
        return self.n_rb * self.subcarriers_per_rb

    @property
    def symbol_duration_s(self) -> float:
        return 1e-3 / self.symbols_per_subframe

    @property
    def bs_height_m(self) -> float:
        return self.macro.height_m if self.deployment == "macro" else self.small_cell.height_m

    @property
    def cells(self):
        return self.macro if self.deployment == "macro" else self.small_cell


@dataclass
class PropagationConfig:
    """Radar-to-eNB propagation. ``None`` fields are derived at load time."""

    frequency_MHz: float | None = None
    tx_height_m: float | None = None
    rx_height_m: float | None = None
    terrain_roughness_m: float | None = None
    terrain_roughness_macro_m: float = 10.0
    terrain_roughness_small_cell_m: float = 20.0
    dielectric: float = 15.0
    conductivity_S_m: float = 0.005
    refractivity_N: float = 301.0
    climate: str = "continental_temperate"
    variability: str = "single_message"
    polarization: str = "horizontal"
    tx_siting: str = "random"
    rx_siting: str = "random"
    time_pct: float = 50.0
    location_pct: float = 50.0
    confidence_pct: float = 50.0


@dataclass
class SimControl:
    seed: int = 1
    duration_s: float = 5.0
    drops: int = 1
    distances_km: list[float] = field(default_factory=lambda: [50.0, 100.0, 150.0, 200.0])
    freq_offsets_MHz: list[float] = field(default_factory=lambda: [0.0, 5.0, 10.0])
    # cell whose SINR map is exported; None picks the centre eNB facing the radar
    plot_cell: int | None = None
    sinr_window_s: list[float] = field(default_factory=lambda: [0.0, 0.02])


@dataclass
class Scenario:
    radar: RadarConfig = field(default_factory=RadarConfig)
    lte: LteConfig = field(default_factory=LteConfig)
    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    sim: SimControl = field(default_factory=SimControl)

    def replace(self, **sections) -> "Scenario":
        return dataclasses.replace(self, **sections)

    def with_radar(self, **changes) -> "Scenario":
        return dataclasses.replace(self, radar=dataclasses.replace(self.radar, **changes))


# -- parsing -----------------------------------------------------------------

def _coerce(value, hint, path):
    origin = typing.get_origin(hint)
    args = typing.get_args(hint)
    if dataclasses.is_dataclass(hint):
        return _build(hint, value, path)
    if origin is typing.Union or type(hint).__name__ == "UnionType":
        if value is None and type(None) in args:
            return None
        inner = [a for a in args if a is not type(None)][0]
        return _coerce(value, inner, path)
    if origin is list:
        if not isinstance(value, (list, tuple)):
            raise ScenarioError(f"expected a list, got {value!r}", path)
        return [_coerce(v, args[0], f"{path}[{i}]") for i, v in enumerate(value)]
    if hint is bool:
        if not isinstance(value, bool):
            raise ScenarioError(f"expected true/false, got {value!r}", path)
        return value
    if hint is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value != int(value):
            raise ScenarioError(f"expected an integer, got {value!r}", path)
        return int(value)
    if hint is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(f"expected a number, got {value!r}", path)
        return float(value)
    if hint is str:
        if not isinstance(value, str):
            raise ScenarioError(f"expected a string, got {value!r}", path)
        return value
    raise TypeError(f"unsupported field type {hint!r} at {path}")


def _build(cls, data, path=""):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ScenarioError(f"expected a mapping, got {data!r}", path or None)
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    for key in data:
        if key not in names:
            where = f"{path}.{key}" if path else str(key)
            raise ScenarioError("unknown key", where)
    kwargs = {}
    for name in names:
        if name in data:
            where = f"{path}.{name}" if path else name
            kwargs[name] = _coerce(data[name], hints[name], where)
    return cls(**kwargs)


def scenario_from_dict(data: dict) -> Scenario:
    scenario = _build(Scenario, data)
    scenario = resolve(scenario)
    validate(scenario)
    return scenario


def load_scenario(text: str) -> Scenario:
    """Parse scenario text, fill defaults, resolve derived fields, validate."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioParseError(f"malformed scenario text: {exc}") from exc
    return scenario_from_dict(data or {})


def load_scenario_file(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return load_scenario(fh.read())


def scenario_to_dict(scenario: Scenario) -> dict:
    return dataclasses.asdict(scenario)


def dump_scenario(scenario: Scenario) -> str:
    """Fully materialised scenario text; loading it gives an equal Scenario."""
    return yaml.safe_dump(scenario_to_dict(scenario), sort_keys=False)


def apply_overrides(data: dict, overrides: list[str]) -> dict:
    """Apply ``dotted.key=value`` overrides to a raw scenario mapping.

    Values are parsed as YAML scalars, so ``true``, ``10`` and ``[1, 2]``
    keep their types.
    """
    for item in overrides:
        if "=" not in item:
            raise ScenarioError(f"override {item!r} is not key=value")
        key, raw = item.split("=", 1)
        parts = key.strip().split(".")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise ScenarioParseError(f"bad override value {raw!r}", key) from exc
        node = data
        for part in parts[:-1]:
            child = node.get(part)
            if child is None:
                child = node[part] = {}
            if not isinstance(child, dict):
                raise ScenarioError("not a section", key)
            node = child
        node[parts[-1]] = value
    return data


# -- resolution & validation -------------------------------------------------

def resolve(scenario: Scenario) -> Scenario:
    """Materialise propagation fields left as ``None``."""
    prop = scenario.propagation
    lte = scenario.lte
    if lte.deployment not in DEPLOYMENTS:
        raise ScenarioError(f"must be one of {DEPLOYMENTS}", "lte.deployment")
    roughness = (prop.terrain_roughness_macro_m if lte.deployment == "macro"
                 else prop.terrain_roughness_small_cell_m)
    resolved = dataclasses.replace(
        prop,
        frequency_MHz=prop.frequency_MHz if prop.frequency_MHz is not None
        else scenario.radar.frequency_MHz,
        tx_height_m=prop.tx_height_m if prop.tx_height_m is not None else scenario.radar.height_m,
        rx_height_m=prop.rx_height_m if prop.rx_height_m is not None else lte.bs_height_m,
        terrain_roughness_m=prop.terrain_roughness_m if prop.terrain_roughness_m is not None
        else roughness,
    )
    return dataclasses.replace(scenario, propagation=resolved)


def _positive(value, path):
    if not value > 0:
        raise ScenarioError(f"must be > 0, got {value}", path)


def validate(scenario: Scenario) -> None:
    r, lte, prop, sim = scenario.radar, scenario.lte, scenario.propagation, scenario.sim
    _positive(r.pri_s, "radar.pri_s (pulse repetition interval)")
    _positive(r.pulse_width_s, "radar.pulse_width_s")
    if r.pulse_width_s >= r.pri_s:
        raise ScenarioError("pulse width must be shorter than the PRI", "radar.pulse_width_s")
    _positive(r.rotation_rpm, "radar.rotation_rpm")
    _positive(r.beamwidth_az_deg, "radar.beamwidth_az_deg")
    _positive(r.beamwidth_el_deg, "radar.beamwidth_el_deg")
    if not 0 < r.scan_deg <= 360:
        raise ScenarioError("must be in (0, 360]", "radar.scan_deg")
    _positive(r.distance_km, "radar.distance_km")
    _positive(r.footprint_angle_rad, "radar.footprint_angle_rad")
    if r.backlobe_floor_dB >= 0:
        raise ScenarioError("must be negative", "radar.backlobe_floor_dB")
    if r.offset_reference not in ("center", "edge"):
        raise ScenarioError("must be 'center' or 'edge'", "radar.offset_reference")
    if not 0 <= r.timing_offset_s < r.pri_s:
        raise ScenarioError("must lie in [0, pri_s)", "radar.timing_offset_s")
    if r.height_m < 0:
        raise ScenarioError("must be >= 0", "radar.height_m")

    if lte.ue_max_power_dBm > 23.0:
        raise ScenarioError("UE transmit power is capped at 23 dBm", "lte.ue_max_power_dBm")
    if len(lte.tdd_pattern) == 0 or set(lte.tdd_pattern) - {"U", "D"}:
        raise ScenarioError("must be a string of U and D", "lte.tdd_pattern")
    for name in ("n_rb", "subcarriers_per_rb", "symbols_per_subframe"):
        _positive(getattr(lte, name), f"lte.{name}")
    _positive(lte.subcarrier_spacing_kHz, "lte.subcarrier_spacing_kHz")
    occupied = lte.n_subcarriers * lte.subcarrier_spacing_kHz * 1e-3
    if occupied > lte.bandwidth_MHz:
        raise ScenarioError(f"{lte.n_rb} RBs occupy {occupied} MHz > channel", "lte.n_rb")
    for sect, cfg in (("macro", lte.macro), ("small_cell", lte.small_cell)):
        if not 0 <= cfg.indoor_fraction <= 1:
            raise ScenarioError("must be in [0, 1]", f"lte.{sect}.indoor_fraction")
        _positive(cfg.ue_per_cell, f"lte.{sect}.ue_per_cell")
        if cfg.min_ue_distance_m < 0:
            raise ScenarioError("must be >= 0", f"lte.{sect}.min_ue_distance_m")
    if lte.macro.sites != 7:
        raise ScenarioError("only the 7-site layout is supported", "lte.macro.sites")
    if len(lte.macro.sector_boresights_deg) != lte.macro.sectors:
        raise ScenarioError("need one boresight per sector", "lte.macro.sector_boresights_deg")
    if lte.link.eesm_beta <= 0:
        raise ScenarioError("must be > 0", "lte.link.eesm_beta")

    from .itm import Climate, Variability  # local: keep config importable standalone
    if prop.climate.upper() not in Climate.__members__:
        raise ScenarioError(f"unknown climate {prop.climate!r}", "propagation.climate")
    if prop.variability.upper() not in Variability.__members__:
        raise ScenarioError(f"unknown variability {prop.variability!r}", "propagation.variability")
    if prop.polarization not in ("horizontal", "vertical"):
        raise ScenarioError("must be horizontal or vertical", "propagation.polarization")
    for name in ("tx_siting", "rx_siting"):
        if getattr(prop, name) not in SITING:
            raise ScenarioError(f"must be one of {tuple(SITING)}", f"propagation.{name}")
    for name in ("time_pct", "location_pct", "confidence_pct"):
        if not 0 < getattr(prop, name) < 100:
            raise ScenarioError("must be in (0, 100)", f"propagation.{name}")
    if prop.terrain_roughness_m < 0:
        raise ScenarioError("must be >= 0", "propagation.terrain_roughness_m")

    _positive(sim.duration_s, "sim.duration_s")
    _positive(sim.drops, "sim.drops")
    if not sim.distances_km:
        raise ScenarioError("need at least one distance", "sim.distances_km")
    for i, d in enumerate(sim.distances_km):
        _positive(d, f"sim.distances_km[{i}]")
    if not any(math.isclose(r.distance_km, d) for d in sim.distances_km):
        raise ScenarioError(
            f"{r.distance_km} km is not in sim.distances_km {sim.distances_km}",
            "radar.distance_km")
    if len(sim.sinr_window_s) != 2 or not 0 <= sim.sinr_window_s[0] < sim.sinr_window_s[1]:
        raise ScenarioError("must be [start, stop] with 0 <= start < stop", "sim.sinr_window_s")


SITING = {"random": 0, "careful": 1, "very_careful": 2}


# -- seeding -----------------------------------------------------------------

def rng_stream(seed: int, *labels) -> np.random.Generator:
    """Independent generator for a labelled subsystem.

    Streams depend only on the master seed and their own labels, so adding
    a new consumer never shifts the draws of an existing one.
    """
    keys = [int(seed) & 0xFFFFFFFF]
    for label in labels:
        keys.append(zlib.crc32(str(label).encode()) if not isinstance(label, int) else label)
    return np.random.default_rng(np.random.SeedSequence(keys))
