import dataclasses

import numpy as np

from radarlte.analysis import mean_loss_percent, stochastically_dominates
from radarlte.scenario import run_pair, run_single, run_sweep


def test_radar_off_runs_identical(macro_scenario):
    off = macro_scenario.with_radar(enabled=False)
    a, _ = run_single(off, radar_on=True)
    b, _ = run_single(off, radar_on=True)
    assert np.array_equal(a.throughput_bps, b.throughput_bps)
    base, intf = run_pair(off)
    assert np.array_equal(base.throughput_bps, intf.throughput_bps)


def test_interfered_below_baseline(macro_scenario):
    base, intf = run_pair(macro_scenario)
    assert intf.mean_bps <= base.mean_bps
    assert np.all(intf.throughput_bps <= base.throughput_bps)
    assert stochastically_dominates(base, intf)


def test_seed_changes_values_not_configuration(macro_scenario):
    other = dataclasses.replace(macro_scenario, sim=dataclasses.replace(macro_scenario.sim, seed=2))
    a, _ = run_single(macro_scenario, radar_on=False)
    b, _ = run_single(other, radar_on=False)
    assert not np.array_equal(a.throughput_bps, b.throughput_bps)
    assert a.throughput_bps.shape == b.throughput_bps.shape
    assert {k: v for k, v in a.meta.items() if k != "seed"} == {k: v for k, v in b.meta.items() if k != "seed"}


def test_baseline_independent_of_radar_fields(macro_scenario):
    a, _ = run_single(macro_scenario, radar_on=False)
    changed = dataclasses.replace(
        macro_scenario.with_radar(distance_km=200.0, freq_offset_MHz=10.0, pri_s=1e-3,
                                  random_scan_phase=True))
    b, _ = run_single(changed, radar_on=False)
    assert np.array_equal(a.throughput_bps, b.throughput_bps)


def test_multiple_drops_stack(macro_scenario):
    two = dataclasses.replace(macro_scenario, sim=dataclasses.replace(macro_scenario.sim, drops=2))
    rep, _ = run_single(two, radar_on=False)
    one, _ = run_single(macro_scenario, radar_on=False)
    assert rep.throughput_bps.size == 420
    assert np.array_equal(rep.throughput_bps[:210], one.throughput_bps)


def test_sweep_parallel_matches_serial(macro_scenario):
    serial = run_sweep(macro_scenario, [50, 200], [0, 10], jobs=1)
    par = run_sweep(macro_scenario, [50, 200], [0, 10], jobs=2)
    assert serial.keys() == par.keys()
    for k in serial.keys():
        assert np.array_equal(serial.entries[k].throughput_bps, par.entries[k].throughput_bps)
    assert serial.loss_percent((50.0, 0.0, "macro")) >= serial.loss_percent((200.0, 0.0, "macro"))
    assert mean_loss_percent(serial.baseline, serial.baseline) == 0.0
