"""Acceptance suite: one test per headline requirement.

Run alone with ``pytest tests/test_acceptance.py -v``; each test prints a
single PASS/FAIL line in verbose mode.
"""

import csv
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import DATA
from radarlte.analysis import stochastically_dominates
from radarlte.antennas import radar_mask_gain_dB, radar_normalized_gain_dB, radar_transition_angles
from radarlte.config import LteConfig, RadarConfig, Scenario, SimControl, load_scenario, resolve
from radarlte.coupling import spectral_fraction, spectral_profile
from radarlte.geometry import illuminated_arc_width
from radarlte.propagation import fspl_dB, itm_apm_loss_dB, los_horizon_km
from radarlte.radar_emitter import build_schedule
from radarlte.scenario import build_drop, radar_exposure, run_sweep


def _check(failures):
    assert not failures, "; ".join(failures)


def test_c01_radar_timing():
    cfg = RadarConfig()
    t0 = time.perf_counter()
    sched = build_schedule(cfg, cfg.rotation_period_s)
    ppd = sched.pulses_per_dwell()
    elapsed = time.perf_counter() - t0
    failures = []
    if ppd.size != 445:
        failures.append(f"{ppd.size} dwells per rotation, expected 445")
    if len(sched) != 4000:
        failures.append(f"{len(sched)} pulses per rotation, expected 4000")
    if abs(cfg.rotation_period_s - 2.0) > cfg.dwell_s:
        failures.append(f"rotation period {cfg.rotation_period_s} s")
    if not np.all(ppd == 9):
        counts = dict(zip(*np.unique(ppd, return_counts=True)))
        failures.append(f"pulses per dwell {({int(k): int(v) for k, v in counts.items()})}, expected 9 in all")
    if elapsed > 0.5:
        failures.append(f"schedule took {elapsed:.3f} s")
    _check(failures)


def test_c02_antenna_pattern():
    theta_m, theta_f = radar_transition_angles(0.81, -50.0)
    failures = []
    if radar_normalized_gain_dB(0.0) != 0.0:
        failures.append("boresight gain is not 0 dB")
    if abs(theta_f - 6.04) > 0.005:
        failures.append(f"theta_f = {theta_f}")
    beyond = np.linspace(theta_f + 1e-6, 180.0, 5000)
    if not np.all(radar_normalized_gain_dB(beyond) == -50.0):
        failures.append("gain beyond theta_f is not -50 dB")
    if abs(radar_mask_gain_dB(0.81) - (-14.8)) > 0.05:
        failures.append(f"mask at theta3dB = {radar_mask_gain_dB(0.81)}")
    sweep = np.round(np.arange(0.0, 180.0 + 0.005, 0.01), 6)
    g = radar_normalized_gain_dB(sweep)
    for t in (theta_m, theta_f):
        k = int(np.searchsorted(sweep, t))
        step = abs(g[k] - g[k - 1])
        if step > 0.5:
            failures.append(f"step of {step:.3f} dB across the transition at {t:.4f} deg")
    _check(failures)


def test_c03_fspl():
    assert fspl_dB(3500, 50) == pytest.approx(137.31, abs=0.01)
    d = np.array([1.0, 7.0, 50.0, 123.0])
    assert np.allclose(fspl_dB(3500, 2 * d) - fspl_dB(3500, d), 6.02, atol=0.005)


def test_c04_los_horizon():
    assert los_horizon_km(50, 25) == pytest.approx(49.49, abs=0.01)
    assert los_horizon_km(50, 10) == pytest.approx(41.96, abs=0.01)
    assert abs(los_horizon_km(50, 25) - 50.0) < 1.0


def test_c05_itm():
    props = {"macro": load_scenario("").propagation,
             "small_cell": load_scenario("lte: {deployment: small_cell}").propagation}
    failures = []
    with open(DATA / "itm_golden.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 40  # 20 distances per deployment
    for row in rows:
        got = itm_apm_loss_dB(float(row["distance_km"]), props[row["deployment"]])
        if abs(got - float(row["loss_dB"])) > 0.1:
            failures.append(f"{row['deployment']} {row['distance_km']} km: {got:.3f} vs {row['loss_dB']}")
    for name, prop in props.items():
        far = np.linspace(60.5, 300.0, 100)
        if not np.all(itm_apm_loss_dB(far, prop) > fspl_dB(3500, far)):
            failures.append(f"{name}: ITM not above FSPL beyond 60 km")
        horizon = los_horizon_km(prop.tx_height_m, prop.rx_height_m)
        near = np.linspace(5.0, 0.8 * horizon, 60)
        gap = np.abs(itm_apm_loss_dB(near, prop) - fspl_dB(3500, near))
        if gap.max() > 3.0:
            i = int(gap.argmax())
            failures.append(f"{name}: |ITM - FSPL| = {gap[i]:.2f} dB at {near[i]:.1f} km "
                            f"(limit 3 dB up to {0.8 * horizon:.1f} km)")
    _check(failures)


def test_c06_symbol_footprint():
    scn = resolve(Scenario(sim=SimControl(duration_s=0.1)))
    t0 = time.perf_counter()
    drop = build_drop(scn)
    grid = radar_exposure(scn, drop).grid
    elapsed = time.perf_counter() - t0
    n_sf = 100
    sym = grid.symbol_power_mW.reshape(grid.n_cells, n_sf, 14)
    ul = np.array([scn.lte.tdd_pattern[i % 5] == "U" for i in range(n_sf)])
    hit = sym > 0
    expected = np.zeros(14, bool)
    expected[[0, 1, 7, 8]] = True  # symbols 1, 2, 8, 9 counted from one
    failures = []
    if hit[:, ~ul].any():
        failures.append("radar power in downlink subframes")
    if not np.all(hit[:, ul] == expected):
        bad = sorted({int(s) + 1 for s in np.nonzero(hit[:, ul] & ~expected)[2]})
        failures.append(f"radar power in symbols {bad} or missing from the expected ones")
    if elapsed >= 1.0:
        failures.append(f"100 ms grid took {elapsed:.2f} s")
    # the main beam sweeps the network in the first dwells; those subframes are illuminated
    main = sym[:, :2].max() / sym[:, 50:].max()
    if main < 1e4:
        failures.append("no main-beam illumination at the start of the run")
    _check(failures)


def test_c07_spectral_model():
    tau = 78e-6
    oracle = quad(lambda f: tau * np.sinc(f * tau) ** 2, -7.5e3, 7.5e3)[0]
    frac = spectral_fraction(0.0, 15e3, tau)
    assert oracle == pytest.approx(0.83, abs=0.02)
    assert frac == pytest.approx(0.83, abs=0.02)
    assert frac == pytest.approx(oracle, abs=1e-6)
    lte = LteConfig()
    scn = resolve(Scenario(sim=SimControl(duration_s=0.02)))
    drop = build_drop(scn)
    totals = []
    for off in (0.0, 5.0, 10.0):
        s = scn.with_radar(freq_offset_MHz=off)
        grid = radar_exposure(s, drop).grid
        totals.append(sum(grid.in_band_power_mW(c) for c in range(grid.n_cells)))
        assert np.allclose(grid.spectrum, spectral_profile(s.radar, lte))
    assert totals[0] > totals[1] > totals[2]


@pytest.mark.slow
def test_c08_throughput_ordering():
    scn = resolve(Scenario(sim=SimControl(duration_s=1.0, drops=1, seed=1)))
    t0 = time.perf_counter()
    res = run_sweep(scn, [50.0, 100.0, 150.0, 200.0])
    elapsed = time.perf_counter() - t0
    losses = [res.loss_percent((d, 0.0, "macro")) for d in (50.0, 100.0, 150.0, 200.0)]
    failures = []
    if not (losses[0] >= losses[1] >= losses[2] >= losses[3] >= 0.0):
        failures.append(f"losses not ordered: {losses}")
    for k in res.keys():
        if not stochastically_dominates(res.baseline, res.entries[k]):
            failures.append(f"baseline CDF does not dominate at {k}")
    if elapsed > 120.0:
        failures.append(f"sweep took {elapsed:.1f} s")
    _check(failures)


@pytest.mark.slow
def test_c09_deployment_contrast():
    losses = {}
    for dep in ("macro", "small_cell"):
        scn = resolve(Scenario(lte=LteConfig(deployment=dep),
                               sim=SimControl(duration_s=1.0, seed=1, distances_km=[100.0]),
                               radar=RadarConfig(distance_km=100.0)))
        res = run_sweep(scn, [100.0])
        losses[dep] = res.loss_percent((100.0, 0.0, dep))
    assert losses["small_cell"] >= losses["macro"], losses


def test_c10_determinism(tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        cmd = [sys.executable, "-m", "radarlte", "run", "--duration", "0.1", "--seed", "5",
               "--out", str(out)]
        subprocess.run(cmd, check=True, capture_output=True)
        outs.append(out)
    names = sorted(p.name for p in outs[0].glob("*.csv"))
    assert len(names) >= 5
    for n in names:
        assert (outs[0] / n).read_bytes() == (outs[1] / n).read_bytes(), n


def test_c11_illuminated_arc():
    for d, w in [(50, 1.5), (100, 3.0), (150, 4.5), (200, 6.0)]:
        got = illuminated_arc_width(d, RadarConfig().footprint_angle_rad)
        assert float(f"{got:.3g}") == w
