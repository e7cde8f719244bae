"""Hexagonal network layout, UE drop and radar-relative geometry.

Coordinates are metres in a local plane with the layout centroid at the
origin. The radar sits on the +x axis, so its bearing toward the network
is 180 degrees.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .antennas import SectorAntenna, wrap_deg
from .config import LteConfig


@dataclass(frozen=True)
class Cell:
    id: int
    site: int
    x: float
    y: float
    height_m: float
    antenna: SectorAntenna

    @property
    def boresight_deg(self):
        return None if self.antenna.omni_azimuth else self.antenna.boresight_deg


@dataclass(frozen=True)
class NetworkLayout:
    deployment: str
    isd_m: float
    sites_xy: np.ndarray  # (n_sites, 2) macro sites, also for small-cell areas
    cells: tuple[Cell, ...]
    ue_xy: np.ndarray  # (n_ue, 2)
    ue_indoor: np.ndarray  # (n_ue,) bool
    ue_home_cell: np.ndarray  # cell whose area the UE was dropped in
    ue_height_m: float

    @property
    def n_cells(self):
        return len(self.cells)

    @property
    def n_ues(self):
        return len(self.ue_xy)

    @property
    def cell_xy(self):
        return np.array([[c.x, c.y] for c in self.cells])

    @property
    def cell_heights(self):
        return np.array([c.height_m for c in self.cells])

    @property
    def centroid(self):
        return self.sites_xy.mean(axis=0)


def hex_sites(isd_m: float) -> np.ndarray:
    """Centre site plus the first ring; neighbours at 30 + 60k degrees."""
    ang = np.radians(30.0 + 60.0 * np.arange(6))
    ring = isd_m * np.column_stack([np.cos(ang), np.sin(ang)])
    return np.vstack([[0.0, 0.0], ring])


def in_site_hexagon(points, site_xy, isd_m):
    """Voronoi hexagon of a lattice site: within isd/2 along every neighbour direction."""
    rel = np.atleast_2d(points) - site_xy
    ang = np.radians(30.0 + 60.0 * np.arange(6))
    proj = rel @ np.vstack([np.cos(ang), np.sin(ang)])
    return np.all(proj <= isd_m / 2.0 + 1e-9, axis=1)


def _in_sector(points, site_xy, boresight_deg, n_sectors):
    rel = np.atleast_2d(points) - site_xy
    bearing = np.degrees(np.arctan2(rel[:, 1], rel[:, 0]))
    return np.abs(wrap_deg(bearing - boresight_deg)) <= 180.0 / n_sectors


def _sample_macro_cell(rng, site_xy, boresight_deg, n_sectors, isd_m, n, accept=None):
    """Uniform points in one sector wedge of a site hexagon, by rejection."""
    radius = isd_m / np.sqrt(3.0)
    out = np.empty((0, 2))
    while len(out) < n:
        batch = rng.uniform(-radius, radius, size=(4 * n + 16, 2)) + site_xy
        ok = in_site_hexagon(batch, site_xy, isd_m) & _in_sector(batch, site_xy, boresight_deg, n_sectors)
        if accept is not None:
            ok &= accept(batch)
        out = np.vstack([out, batch[ok]])
    return out[:n]


def _min_distance_to(points, anchors):
    d = np.linalg.norm(np.atleast_2d(points)[:, None, :] - anchors[None, :, :], axis=2)
    return d.min(axis=1)


def _macro_cells(lte: LteConfig, sites):
    m = lte.macro
    cells = []
    for s, xy in enumerate(sites):
        for k, boresight in enumerate(m.sector_boresights_deg):
            ant = SectorAntenna(
                max_gain_dBi=m.gain_dBi, boresight_deg=boresight,
                theta3dB_az_deg=m.theta3dB_az_deg, theta3dB_el_deg=m.theta3dB_el_deg,
                downtilt_deg=m.downtilt_deg, am_dB=m.am_dB)
            cells.append(Cell(len(cells), s, float(xy[0]), float(xy[1]), m.height_m, ant))
    return cells


def _small_cells(lte: LteConfig, sites, rng):
    m, sc = lte.macro, lte.small_cell
    ant = SectorAntenna(
        max_gain_dBi=sc.gain_dBi, theta3dB_el_deg=sc.theta3dB_el_deg,
        downtilt_deg=sc.downtilt_deg, am_dB=sc.am_dB,
        omni_azimuth=True, omni_elevation=sc.omni_elevation)
    placed = np.empty((0, 2))
    cells = []
    for s, xy in enumerate(sites):
        for boresight in m.sector_boresights_deg:
            for _ in range(sc.per_macro_cell):
                def ok(pts, placed=placed):
                    good = _min_distance_to(pts, sites) >= sc.min_macro_distance_m
                    if len(placed):
                        good &= _min_distance_to(pts, placed) >= sc.min_separation_m
                    return good

                p = _sample_macro_cell(rng, xy, boresight, m.sectors, m.isd_m, 1, ok)[0]
                placed = np.vstack([placed, p])
                cells.append(Cell(len(cells), s, float(p[0]), float(p[1]), sc.height_m, ant))
    return cells


def build_layout(lte: LteConfig, rng: np.random.Generator) -> NetworkLayout:
    """Hexagonal 7-site network with UEs dropped uniformly per cell.

    Macro UEs fill each sector wedge; small-cell UEs fill a disc around
    their small cell. Any UE closer than the minimum distance to a base
    station is redrawn. Exactly ``round(indoor_fraction * n)`` UEs are indoor.
    """
    m = lte.macro
    sites = hex_sites(m.isd_m)
    if lte.deployment == "macro":
        cells = _macro_cells(lte, sites)
        cfg = m
    else:
        cells = _small_cells(lte, sites, rng)
        cfg = lte.small_cell
    bs_xy = np.array([[c.x, c.y] for c in cells])
    anchors = sites if lte.deployment == "macro" else bs_xy

    ue_xy, home = [], []
    for cell in cells:
        def far_enough(pts):
            return _min_distance_to(pts, anchors) >= cfg.min_ue_distance_m

        if lte.deployment == "macro":
            pts = _sample_macro_cell(rng, sites[cell.site], cell.antenna.boresight_deg,
                                     m.sectors, m.isd_m, cfg.ue_per_cell, far_enough)
        else:
            pts = _sample_disc(rng, np.array([cell.x, cell.y]), lte.small_cell.ue_drop_radius_m,
                               cfg.ue_per_cell, far_enough)
        ue_xy.append(pts)
        home.extend([cell.id] * cfg.ue_per_cell)
    ue_xy = np.vstack(ue_xy)

    n = len(ue_xy)
    indoor = np.zeros(n, dtype=bool)
    indoor[rng.permutation(n)[: int(round(cfg.indoor_fraction * n))]] = True
    return NetworkLayout(
        deployment=lte.deployment, isd_m=m.isd_m, sites_xy=sites, cells=tuple(cells),
        ue_xy=ue_xy, ue_indoor=indoor, ue_home_cell=np.array(home), ue_height_m=lte.ue_height_m)


def _sample_disc(rng, center, radius, n, accept):
    out = np.empty((0, 2))
    while len(out) < n:
        r = radius * np.sqrt(rng.uniform(size=4 * n + 16))
        phi = rng.uniform(0, 2 * np.pi, size=r.size)
        batch = center + np.column_stack([r * np.cos(phi), r * np.sin(phi)])
        out = np.vstack([out, batch[accept(batch)]])
    return out[:n]


@dataclass(frozen=True)
class RadarGeometry:
    """Per-cell geometry with the radar at ``distance_km`` on the +x axis.

    ``azimuth_deg`` is the bearing of the cell seen from the radar, measured
    from the radar-to-centroid line (positive toward +y). ``elevation_deg``
    is the cell's elevation seen from the radar (negative when lower).
    ``bearing_to_radar_deg`` / ``elevation_to_radar_deg`` are the same line
    seen from the cell, in absolute layout bearings.
    """

    distance_km: float
    radar_xy: np.ndarray
    range_km: np.ndarray
    azimuth_deg: np.ndarray
    elevation_deg: np.ndarray
    bearing_to_radar_deg: np.ndarray
    elevation_to_radar_deg: np.ndarray


def radar_geometry(layout: NetworkLayout, distance_km: float, radar_height_m: float = 50.0):
    if distance_km <= 0:
        raise ValueError("distance_km must be > 0")
    radar_xy = layout.centroid + np.array([distance_km * 1e3, 0.0])
    xy = layout.cell_xy
    h = layout.cell_heights
    dx = xy[:, 0] - radar_xy[0]
    dy = xy[:, 1] - radar_xy[1]
    horiz = np.hypot(dx, dy)
    dz = h - radar_height_m
    # angle from the radar->centroid direction (-x), counter-clockwise positive toward +y
    azimuth = np.degrees(np.arctan2(-dy, -dx))
    azimuth = -azimuth  # positive toward +y when looking along -x
    return RadarGeometry(
        distance_km=distance_km,
        radar_xy=radar_xy,
        range_km=np.sqrt(horiz**2 + dz**2) / 1e3,
        azimuth_deg=wrap_deg(azimuth),
        elevation_deg=np.degrees(np.arctan2(dz, horiz)),
        bearing_to_radar_deg=np.degrees(np.arctan2(-dy, -dx)),
        elevation_to_radar_deg=np.degrees(np.arctan2(-dz, horiz)),
    )


def illuminated_arc_width(distance_km: float, footprint_angle_rad: float) -> float:
    """Width (km) of the strip swept by one beam position at ``distance_km``."""
    if distance_km <= 0 or footprint_angle_rad <= 0:
        raise ValueError("distance and footprint angle must be > 0")
    return distance_km * footprint_angle_rad


def write_layout_csv(layout: NetworkLayout, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["cell_id", "site", "x_m", "y_m", "height_m", "boresight_deg"])
        for c in layout.cells:
            w.writerow([c.id, c.site, repr(c.x), repr(c.y), c.height_m,
                        "" if c.boresight_deg is None else c.boresight_deg])
