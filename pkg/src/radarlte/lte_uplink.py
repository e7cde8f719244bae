"""System-level TDD LTE uplink with radar interference.

Links use the IMT-Advanced urban macro (UMa) or urban micro (UMi) path
loss with a LoS-probability draw and lognormal shadowing. UEs attach to
the cell with the smallest coupling loss, run fractional power control,
and share the band round-robin. Per-RE SINR is mapped to throughput via an
exponential effective SINR (EESM) and a truncated Shannon curve.

There is no fast fading. Without radar, SINR is constant over the symbols
and subcarriers of one resource block. Radar power is spread over the
grid as (per-symbol power) x (per-subcarrier spectral fraction).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .config import LinkConfig, LteConfig, rng_stream
from .coupling import InterferenceGrid
from .geometry import NetworkLayout

C_LIGHT = 299_792_458.0


# -- path loss -------------------------------------------------------------

def p_los_uma(d_m):
    d = np.asarray(d_m, dtype=float)
    return np.minimum(18.0 / d, 1.0) * (1.0 - np.exp(-d / 63.0)) + np.exp(-d / 63.0)


def p_los_umi(d_m):
    d = np.asarray(d_m, dtype=float)
    return np.minimum(18.0 / d, 1.0) * (1.0 - np.exp(-d / 36.0)) + np.exp(-d / 36.0)


def _los_pl(d, fc_GHz, h_bs, h_ut):
    d_bp = 4.0 * (h_bs - 1.0) * (h_ut - 1.0) * fc_GHz * 1e9 / C_LIGHT
    near = 22.0 * np.log10(d) + 28.0 + 20.0 * np.log10(fc_GHz)
    far = (40.0 * np.log10(d) + 7.8 - 18.0 * np.log10(h_bs - 1.0)
           - 18.0 * np.log10(h_ut - 1.0) + 2.0 * np.log10(fc_GHz))
    return np.where(d < d_bp, near, far)


def uma_pathloss_dB(d_m, fc_GHz, los, h_bs=25.0, h_ut=1.5, street_w=20.0, bldg_h=20.0):
    d = np.maximum(np.asarray(d_m, dtype=float), 10.0)
    nlos = (161.04 - 7.1 * np.log10(street_w) + 7.5 * np.log10(bldg_h)
            - (24.37 - 3.7 * (bldg_h / h_bs) ** 2) * np.log10(h_bs)
            + (43.42 - 3.1 * np.log10(h_bs)) * (np.log10(d) - 3.0)
            + 20.0 * np.log10(fc_GHz) - (3.2 * np.log10(11.75 * h_ut) ** 2 - 4.97))
    los_pl = _los_pl(d, fc_GHz, h_bs, h_ut)
    # a NLoS link is never allowed to beat the LoS value at the same distance
    return np.where(los, los_pl, np.maximum(nlos, los_pl))


def umi_pathloss_dB(d_m, fc_GHz, los, h_bs=10.0, h_ut=1.5):
    d = np.maximum(np.asarray(d_m, dtype=float), 10.0)
    nlos = 36.7 * np.log10(d) + 22.7 + 26.0 * np.log10(fc_GHz)
    los_pl = _los_pl(d, fc_GHz, h_bs, h_ut)
    return np.where(los, los_pl, np.maximum(nlos, los_pl))


SHADOW_SIGMA_DB = {"macro": (4.0, 6.0), "small_cell": (3.0, 4.0)}  # (LoS, NLoS)


@dataclass(frozen=True)
class LinkBudget:
    """UE-to-cell coupling losses and the resulting attachment."""

    coupling_loss_dB: np.ndarray  # (n_ue, n_cells)
    serving_cell: np.ndarray  # (n_ue,)

    @property
    def serving_loss_dB(self):
        return self.coupling_loss_dB[np.arange(len(self.serving_cell)), self.serving_cell]


def ue_coupling_loss(layout: NetworkLayout, lte: LteConfig, seed: int, *,
                     los_uniform=None, shadow_normal=None) -> np.ndarray:
    """Coupling loss (dB) for every UE/cell pair, shape (n_ue, n_cells).

    Random draws come from seeded streams keyed on the UE and the base
    station location, so co-sited sectors see the same LoS state and
    shadowing. Draws may be injected for testing.
    """
    cells = layout.cells
    bs_xy = layout.cell_xy
    h_bs = layout.cell_heights
    if layout.deployment == "macro":
        loc = np.array([c.site for c in cells])
        pl_fn, p_los = uma_pathloss_dB, p_los_uma
    else:
        loc = np.arange(len(cells))
        pl_fn, p_los = umi_pathloss_dB, p_los_umi
    n_ue, n_loc = layout.n_ues, int(loc.max()) + 1

    if los_uniform is None or shadow_normal is None:
        rng = rng_stream(seed, "channel", layout.deployment)
        u = rng.uniform(size=(n_ue, n_loc))
        z = rng.standard_normal(size=(n_ue, n_loc))
        los_uniform = u if los_uniform is None else los_uniform
        shadow_normal = z if shadow_normal is None else shadow_normal
    los_uniform = np.asarray(los_uniform)[:, loc]
    shadow_normal = np.asarray(shadow_normal)[:, loc]

    rel = bs_xy[None, :, :] - layout.ue_xy[:, None, :]
    d2d = np.hypot(rel[..., 0], rel[..., 1])
    dz = h_bs[None, :] - layout.ue_height_m
    d3d = np.sqrt(d2d**2 + dz**2)
    los = los_uniform < p_los(np.maximum(d2d, 1e-9))
    pl = pl_fn(d3d, lte.carrier_MHz / 1e3, los, h_bs=h_bs[None, :], h_ut=layout.ue_height_m)

    sigma_los, sigma_nlos = SHADOW_SIGMA_DB[layout.deployment]
    shadow = np.where(los, sigma_los, sigma_nlos) * shadow_normal if lte.shadowing else 0.0
    indoor = np.where(layout.ue_indoor, lte.indoor_loss_dB, 0.0)[:, None]

    # BS antenna toward the UE: bearing from BS, elevation negative (below the mast)
    bearing = np.degrees(np.arctan2(-rel[..., 1], -rel[..., 0]))
    elev = np.degrees(np.arctan2(-dz, np.maximum(d2d, 1e-9)))
    g_bs = np.column_stack([
        c.antenna.gain_dBi(bearing[:, j], elev[:, j]) for j, c in enumerate(cells)])
    return pl + shadow + indoor - g_bs - lte.ue_antenna_gain_dBi


def attach(coupling_loss_dB: np.ndarray) -> LinkBudget:
    return LinkBudget(coupling_loss_dB, np.argmin(coupling_loss_dB, axis=1))


# -- power control and scheduling ------------------------------------------

def ul_transmit_power_dBm(coupling_loss_dB, n_rb, link: LinkConfig, p_max_dBm=23.0):
    """Fractional open-loop power control, capped at the UE maximum."""
    p = link.p0_dBm + 10.0 * np.log10(n_rb) + link.alpha * np.asarray(coupling_loss_dB)
    return np.minimum(p_max_dBm, p)


def is_uplink_subframe(subframe: int, lte: LteConfig) -> bool:
    return lte.tdd_pattern[subframe % len(lte.tdd_pattern)] == "U"


def schedule_subframe(ues, n_rb: int, ul_index: int) -> np.ndarray:
    """Round-robin allocation of all RBs: returns the UE id on each RB.

    RBs are split into contiguous blocks as evenly as possible (the first
    ``n_rb % n`` UEs get one extra RB). The UE order rotates by one at every
    uplink subframe so that the larger blocks and band positions circulate.
    Returns an empty array when ``ues`` is empty.
    """
    ues = np.asarray(ues)
    n = len(ues)
    if n == 0:
        return np.zeros(0, dtype=int)
    order = np.roll(ues, -(ul_index % n))
    sizes = np.full(n, n_rb // n)
    sizes[: n_rb % n] += 1
    return np.repeat(order, sizes)


# -- SINR and link-to-system -------------------------------------------------

def noise_per_subcarrier_dBm(lte: LteConfig) -> float:
    return (lte.thermal_noise_dBm_Hz + 10.0 * np.log10(lte.subcarrier_spacing_kHz * 1e3)
            + lte.bs_noise_figure_dB)


def ul_sinr(signal_mW, noise_mW, intercell_mW, radar_mW=0.0):
    """Linear-domain SINR in dB; all inputs are per-subcarrier powers in mW."""
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(signal_mW) / (noise_mW + intercell_mW + radar_mW))


def eesm_dB(sinr_dB, beta=1.0, axis=None):
    """Exponential effective SINR of a set of per-RE SINRs (dB in, dB out)."""
    lin = 10.0 ** (np.asarray(sinr_dB, dtype=float) / 10.0)
    return 10.0 * np.log10(eesm_linear(lin, beta, axis))


def eesm_linear(sinr, beta=1.0, axis=None):
    s = np.asarray(sinr, dtype=float)
    # shift by the minimum so exp() does not underflow to zero at high SINR
    m = np.min(s, axis=axis, keepdims=True)
    mean = np.mean(np.exp(-(s - m) / beta), axis=axis, keepdims=True)
    out = m - beta * np.log(mean)
    return np.squeeze(out, axis=axis) if axis is not None else float(out.squeeze())


def spectral_efficiency(eff_sinr_dB, link: LinkConfig):
    x = np.asarray(eff_sinr_dB, dtype=float)
    se = np.minimum(link.efficiency * np.log2(1.0 + 10.0 ** (x / 10.0)),
                    link.max_spectral_efficiency)
    return np.where(x < link.min_sinr_dB, 0.0, se)


def subframe_throughput(sinr_dB, n_rb, lte: LteConfig):
    """Bits delivered in one subframe for a UE given its per-RE SINRs."""
    bandwidth = n_rb * lte.subcarriers_per_rb * lte.subcarrier_spacing_kHz * 1e3
    eff = eesm_dB(sinr_dB, lte.link.eesm_beta)
    return float(bandwidth * 1e-3 * spectral_efficiency(eff, lte.link))


# -- reports -----------------------------------------------------------------

@dataclass
class SinrGrid:
    """SINR (dB) per symbol and subcarrier for one eNB over a time window.

    Rows are absolute symbol indices ``symbols``; downlink symbols are NaN.
    """

    cell: int
    symbols: np.ndarray
    sinr_dB: np.ndarray  # (n_symbols, n_subcarriers)
    symbols_per_subframe: int = 14

    def write_csv(self, path) -> None:
        n = self.symbols_per_subframe
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["subframe", "symbol", "subcarrier", "sinr_dB"])
            for r, s in enumerate(self.symbols):
                row = self.sinr_dB[r]
                if np.all(np.isnan(row)):
                    continue
                for k, v in enumerate(row):
                    w.writerow([s // n, s % n + 1, k, f"{v:.4f}"])


@dataclass
class ThroughputReport:
    throughput_bps: np.ndarray  # per UE, averaged over the run
    serving_cell: np.ndarray
    duration_s: float
    meta: dict = field(default_factory=dict)

    @property
    def mean_bps(self) -> float:
        return float(np.mean(self.throughput_bps))

    def percentile_bps(self, q) -> float:
        return float(np.percentile(self.throughput_bps, q))

    def summary(self) -> dict:
        t = self.throughput_bps
        return {
            "n_ue": int(t.size),
            "mean_bps": float(t.mean()),
            "p5_bps": float(np.percentile(t, 5)),
            "p50_bps": float(np.percentile(t, 50)),
            "p95_bps": float(np.percentile(t, 95)),
        }

    def write_csv(self, path, baseline: "ThroughputReport | None" = None) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            head = ["ue", "serving_cell", "throughput_bps"]
            if baseline is not None:
                head += ["baseline_bps", "loss_percent"]
            w.writerow(head)
            for i, (c, t) in enumerate(zip(self.serving_cell, self.throughput_bps)):
                row = [i, int(c), f"{t:.3f}"]
                if baseline is not None:
                    b = baseline.throughput_bps[i]
                    row += [f"{b:.3f}", f"{100.0 * (1 - t / b) if b > 0 else 0.0:.6f}"]
                w.writerow(row)


# -- engine ------------------------------------------------------------------

def run_uplink(layout: NetworkLayout, budget: LinkBudget, lte: LteConfig, duration_s: float,
               grid: InterferenceGrid | None = None, sinr_cell: int | None = None,
               sinr_window_s=(0.0, 0.02)):
    """Simulate whole subframes covering ``duration_s``.

    Returns ``(ThroughputReport, SinrGrid | None)``. The SINR map is
    recorded for ``sinr_cell`` over ``sinr_window_s`` when a cell is given.
    """
    n_sf = int(round(duration_s * 1e3))
    n_cells, n_ue = layout.n_cells, layout.n_ues
    n_rb, n_sc_rb = lte.n_rb, lte.subcarriers_per_rb
    n_sym = lte.symbols_per_subframe
    link = lte.link

    serving = budget.serving_cell
    members = [np.nonzero(serving == c)[0] for c in range(n_cells)]
    rb_count = np.zeros(n_ue, dtype=int)
    for ues in members:
        if len(ues):
            base = schedule_subframe(ues, n_rb, 0)
            rb_count[ues] = np.bincount(base, minlength=n_ue)[ues]
    # every UE keeps its RB count across subframes (rotation only reorders blocks)
    p_tx = ul_transmit_power_dBm(budget.serving_loss_dB, np.maximum(rb_count, 1), link,
                                 lte.ue_max_power_dBm)
    p_sc_mW = 10.0 ** ((p_tx - 10.0 * np.log10(np.maximum(rb_count, 1) * n_sc_rb)) / 10.0)
    gain = 10.0 ** (-budget.coupling_loss_dB / 10.0)  # (n_ue, n_cells)
    rx_mW = p_sc_mW[:, None] * gain  # per-subcarrier power of UE at each cell
    noise_mW = 10.0 ** (noise_per_subcarrier_dBm(lte) / 10.0)
    bw_rb = n_sc_rb * lte.subcarrier_spacing_kHz * 1e3

    radar_sc = None
    if grid is not None:
        radar_sc = grid.spectrum.reshape(n_rb, n_sc_rb)

    bits = np.zeros(n_ue)
    win = None
    if sinr_cell is not None:
        s0 = int(round(sinr_window_s[0] * 1e3)) * n_sym
        s1 = min(int(round(sinr_window_s[1] * 1e3)), n_sf) * n_sym
        win = SinrGrid(sinr_cell, np.arange(s0, s1),
                       np.full((max(s1 - s0, 0), n_rb * n_sc_rb), np.nan), n_sym)

    cells_idx = np.arange(n_cells)[:, None]
    ul_index = 0
    for sf in range(n_sf):
        if not is_uplink_subframe(sf, lte):
            continue
        alloc = np.full((n_cells, n_rb), -1, dtype=int)
        for c, ues in enumerate(members):
            if len(ues):
                alloc[c] = schedule_subframe(ues, n_rb, ul_index)
        ul_index += 1
        active = alloc >= 0
        ue_on = np.where(active, alloc, 0)

        signal = np.where(active, rx_mW[ue_on, cells_idx], 0.0)  # (cells, rb)
        # interference at cell c on rb r: all scheduled UEs on r at c, minus own
        on_rb = np.zeros((n_ue, n_rb))
        rb_idx = np.broadcast_to(np.arange(n_rb), alloc.shape)
        on_rb[alloc[active], rb_idx[active]] = 1.0
        total = rx_mW.T @ on_rb  # every scheduled UE's power at every cell, per RB
        icell = total - signal
        denom_rb = noise_mW + icell  # (cells, rb)

        radar_pow = None if grid is None else grid.subframe(sf)  # (cells, sym)
        hit = radar_pow is not None and np.any(radar_pow > 0)
        if not hit:
            sinr_rb = signal / denom_rb
            eff_rb = sinr_rb  # constant over the RB's REs
            _accumulate_flat(bits, alloc, active, eff_rb, bw_rb, link)
            if win is not None:
                _record(win, sf, n_sym, sinr_rb[sinr_cell], n_sc_rb, active[sinr_cell])
            continue

        # only the symbols carrying radar power need the full RE grid
        hit_sym = np.nonzero(np.any(radar_pow > 0, axis=0))[0]
        sinr_rb = signal / denom_rb
        radar = radar_pow[:, hit_sym, None, None] * radar_sc[None, None, :, :]
        sinr_hit = signal[:, None, :, None] / (denom_rb[:, None, :, None] + radar)
        _accumulate_radar(bits, alloc, active, sinr_rb, sinr_hit, n_sym, bw_rb, link)
        if win is not None:
            full = np.broadcast_to(sinr_rb[sinr_cell][None, :, None], (n_sym, n_rb, n_sc_rb)).copy()
            full[hit_sym] = sinr_hit[sinr_cell]
            _record_full(win, sf, n_sym, full, active[sinr_cell])

    duration = n_sf * 1e-3
    report = ThroughputReport(bits / duration, serving.copy(), duration)
    return report, win


def _accumulate_flat(bits, alloc, active, sinr_rb, bw_rb, link):
    """Per UE: all of its REs share the RB-level SINR of each RB it holds."""
    u = alloc[active]
    s = sinr_rb[active]
    ue_ids, inv, counts = np.unique(u, return_inverse=True, return_counts=True)
    mins = np.full(ue_ids.size, np.inf)
    np.minimum.at(mins, inv, s)
    acc = np.zeros(ue_ids.size)
    np.add.at(acc, inv, np.exp(-(s - mins[inv]) / link.eesm_beta))
    eff = mins - link.eesm_beta * np.log(acc / counts)
    with np.errstate(divide="ignore"):
        eff_dB = 10.0 * np.log10(eff)
    bits[ue_ids] += counts * bw_rb * 1e-3 * spectral_efficiency(eff_dB, link)


def _accumulate_radar(bits, alloc, active, sinr_rb, sinr_hit, n_sym, bw_rb, link):
    """Per UE EESM over every (symbol, subcarrier) of its RBs.

    ``sinr_rb`` (cells, rb) holds the radar-free SINR shared by the clean
    symbols; ``sinr_hit`` (cells, hit symbols, rb, sc) the radar-hit ones.
    """
    beta = link.eesm_beta
    n_hit, n_sc = sinr_hit.shape[1], sinr_hit.shape[3]
    # stable log-sum-exp: shift every RB by its smallest RE SINR
    rb_min = np.minimum(sinr_rb, sinr_hit.min(axis=(1, 3))) if n_hit else sinr_rb
    rb_sum = (n_sym - n_hit) * n_sc * np.exp(-(sinr_rb - rb_min) / beta)
    if n_hit:
        rb_sum = rb_sum + np.exp(-(sinr_hit - rb_min[:, None, :, None]) / beta).sum(axis=(1, 3))
    n_re = n_sym * n_sc
    u = alloc[active]
    mn = rb_min[active]
    sm = rb_sum[active]
    ue_ids, inv, counts = np.unique(u, return_inverse=True, return_counts=True)
    mins = np.full(ue_ids.size, np.inf)
    np.minimum.at(mins, inv, mn)
    acc = np.zeros(ue_ids.size)
    np.add.at(acc, inv, sm * np.exp(-(mn - mins[inv]) / beta))
    eff = mins - beta * np.log(acc / (counts * n_re))
    with np.errstate(divide="ignore"):
        eff_dB = 10.0 * np.log10(eff)
    bits[ue_ids] += counts * bw_rb * 1e-3 * spectral_efficiency(eff_dB, link)


def _record(win, sf, n_sym, sinr_rb, n_sc_rb, active):
    rows = np.arange(sf * n_sym, (sf + 1) * n_sym) - win.symbols[0] if len(win.symbols) else []
    if len(rows) == 0 or rows[0] < 0 or rows[-1] >= len(win.symbols):
        return
    vals = np.where(active, sinr_rb, np.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        win.sinr_dB[rows] = np.repeat(10.0 * np.log10(vals), n_sc_rb)[None, :]


def _record_full(win, sf, n_sym, sinr_cell, active):
    rows = np.arange(sf * n_sym, (sf + 1) * n_sym) - win.symbols[0] if len(win.symbols) else []
    if len(rows) == 0 or rows[0] < 0 or rows[-1] >= len(win.symbols):
        return
    vals = np.where(active[None, :, None], sinr_cell, np.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        win.sinr_dB[rows] = 10.0 * np.log10(vals.reshape(n_sym, -1))
