import dataclasses

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radarlte.antennas import SectorAntenna
from radarlte.config import LinkConfig, LteConfig, rng_stream
from radarlte.coupling import InterferenceGrid
from radarlte.geometry import build_layout
from radarlte.lte_uplink import (
    attach, eesm_dB, is_uplink_subframe, noise_per_subcarrier_dBm, p_los_uma, run_uplink,
    schedule_subframe, spectral_efficiency, subframe_throughput, ue_coupling_loss,
    ul_sinr, ul_transmit_power_dBm, uma_pathloss_dB, umi_pathloss_dB,
)

LTE = LteConfig()
LINK = LinkConfig()


@pytest.fixture(scope="module")
def macro():
    lay = build_layout(LTE, rng_stream(1, "layout"))
    return lay, attach(ue_coupling_loss(lay, LTE, 1))


def test_coupling_loss_deterministic_and_positive(macro):
    lay, budget = macro
    again = ue_coupling_loss(lay, LTE, 1)
    assert np.array_equal(again, budget.coupling_loss_dB)
    assert np.all(budget.coupling_loss_dB > 0)
    assert np.array_equal(budget.serving_cell, budget.coupling_loss_dB.argmin(axis=1))


def test_indoor_adds_exactly_penetration(macro):
    lay, budget = macro
    flipped = dataclasses.replace(lay, ue_indoor=~lay.ue_indoor)
    diff = ue_coupling_loss(flipped, LTE, 1) - budget.coupling_loss_dB
    sign = np.where(flipped.ue_indoor, 1.0, -1.0)[:, None]
    assert np.allclose(diff, 20.0 * sign, atol=1e-9)


@given(st.floats(min_value=0, max_value=1), st.floats(min_value=10, max_value=2000),
       st.floats(min_value=1, max_value=500))
def test_pathloss_monotone_for_fixed_los_draw(u, d, dd):
    for pl, plos in ((uma_pathloss_dB, p_los_uma), (umi_pathloss_dB, None)):
        p = plos or (lambda x: np.minimum(18 / x, 1) * (1 - np.exp(-x / 36)) + np.exp(-x / 36))
        a = pl(d, 3.5, u < p(d))
        b = pl(d + dd, 3.5, u < p(d + dd))
        assert b >= a - 1e-9


def test_coupling_monotone_without_shadowing(macro):
    # with a flat antenna the loss is pure path loss and grows with distance;
    # a real sector antenna is not monotone close to the mast, where the UE sits
    # far below the downtilted main beam
    lay, _ = macro
    lte = dataclasses.replace(LTE, shadowing=False)
    flat = SectorAntenna(17.0, omni_azimuth=True, omni_elevation=True)
    cells = tuple(dataclasses.replace(c, antenna=flat) for c in lay.cells)
    n = 60
    xy = np.column_stack([np.linspace(30, 400, n), np.zeros(n)])
    line = dataclasses.replace(lay, cells=cells, ue_xy=xy, ue_indoor=np.zeros(n, bool),
                               ue_home_cell=np.zeros(n, int))
    for u in (0.0, 0.3, 0.7, 1.0):
        cl = ue_coupling_loss(line, lte, 1, los_uniform=np.full((n, 7), u),
                              shadow_normal=np.zeros((n, 7)))
        assert np.all(np.diff(cl[:, 0]) >= -1e-9)


def test_power_control():
    assert ul_transmit_power_dBm(200.0, 10, LINK) == 23.0
    zero = dataclasses.replace(LINK, alpha=0.0)
    assert ul_transmit_power_dBm(80.0, 1, zero) == ul_transmit_power_dBm(120.0, 1, zero) == -85.0
    full = dataclasses.replace(LINK, alpha=1.0)
    assert ul_transmit_power_dBm(70.0, 1, full) - ul_transmit_power_dBm(60.0, 1, full) == pytest.approx(10.0)


@given(st.floats(min_value=0, max_value=300), st.integers(min_value=1, max_value=100))
def test_power_never_exceeds_cap(cl, m):
    assert ul_transmit_power_dBm(cl, m, LINK) <= 23.0


def test_round_robin_examples():
    a = schedule_subframe(np.arange(10), 100, 0)
    assert np.all(np.bincount(a) == 10)
    assert np.all(schedule_subframe([7], 100, 5) == 7)
    assert schedule_subframe([], 100, 0).size == 0
    assert not is_uplink_subframe(3, LTE) and not is_uplink_subframe(4, LTE)
    assert is_uplink_subframe(5, LTE)


@given(st.integers(min_value=1, max_value=150), st.integers(min_value=0, max_value=1000))
def test_round_robin_properties(n, k):
    a = schedule_subframe(np.arange(n), 100, k)
    assert a.size == 100
    counts = np.bincount(a, minlength=n)
    assert counts.max() - counts.min() <= 1
    # contiguous blocks: each UE appears in one run
    assert len(np.unique(a)) == np.count_nonzero(np.diff(a)) + 1
    assert np.array_equal(a, schedule_subframe(np.arange(n), 100, k))


def test_noise_and_sinr():
    assert noise_per_subcarrier_dBm(LTE) == pytest.approx(-174 + 10 * np.log10(15e3) + 5)
    n = 10 ** (-127.24 / 10)
    assert ul_sinr(1e-10, n, 0.0) == pytest.approx(-100 + 127.24, abs=0.01)
    base = ul_sinr(1e-10, n, 2e-13)
    assert base - ul_sinr(1e-10, n, 2e-13, n + 2e-13) == pytest.approx(10 * np.log10(2), abs=1e-9)


def test_eesm_and_mapping():
    assert eesm_dB([7.0] * 20) == pytest.approx(7.0)
    assert spectral_efficiency(-7.5, LINK) == 0.0
    assert spectral_efficiency(80.0, LINK) == 6.0
    assert subframe_throughput(np.full(168, -10.0), 1, LTE) == 0.0
    assert subframe_throughput(np.full(168, 60.0), 1, LTE) == pytest.approx(180e3 * 1e-3 * 6.0)


@given(st.lists(st.floats(min_value=-20, max_value=40), min_size=1, max_size=50))
def test_eesm_bounded_by_extremes(vals):
    e = eesm_dB(vals)
    assert min(vals) - 1e-9 <= e <= max(vals) + 1e-9


def test_run_uplink_tdd_and_empty_grid(macro):
    lay, budget = macro
    rep, _ = run_uplink(lay, budget, LTE, 0.02)
    assert np.all(rep.throughput_bps >= 0) and rep.mean_bps > 0
    empty = InterferenceGrid.empty(lay.n_cells, 20 * 14, 1200)
    rep2, _ = run_uplink(lay, budget, LTE, 0.02, empty)
    assert np.array_equal(rep.throughput_bps, rep2.throughput_bps)
    # only UL subframes carry bits: 5 ms with all-downlink pattern gives nothing
    dl = dataclasses.replace(LTE, tdd_pattern="DDDDD")
    rep3, _ = run_uplink(lay, budget, dl, 0.01)
    assert not rep3.throughput_bps.any()


def test_uplink_fraction_is_three_of_five(macro):
    lay, budget = macro
    all_ul = dataclasses.replace(LTE, tdd_pattern="U")
    a, _ = run_uplink(lay, budget, LTE, 0.05)
    b, _ = run_uplink(lay, budget, all_ul, 0.05)
    assert a.throughput_bps.sum() / b.throughput_bps.sum() == pytest.approx(0.6, rel=0.02)


def test_radar_hits_only_lower_sinr(macro):
    lay, budget = macro
    grid = InterferenceGrid.empty(lay.n_cells, 5 * 14, 1200)
    grid.spectrum[:] = 1.0 / 1200
    grid.symbol_power_mW[:, 0] = 1e-9  # symbol 1 of subframe 0 at every cell
    base, win0 = run_uplink(lay, budget, LTE, 0.005, None, sinr_cell=0, sinr_window_s=(0, 0.005))
    hit, win1 = run_uplink(lay, budget, LTE, 0.005, grid, sinr_cell=0, sinr_window_s=(0, 0.005))
    assert np.all(hit.throughput_bps <= base.throughput_bps)
    assert np.all(win1.sinr_dB[0] < win0.sinr_dB[0])
    assert np.array_equal(win1.sinr_dB[1:], win0.sinr_dB[1:], equal_nan=True)
    assert np.all(np.isnan(win0.sinr_dB[3 * 14:]))  # downlink subframes
