import numpy as np
import pytest
from hypothesis import given, strategies as st

from radarlte.config import RadarConfig
from radarlte.radar_emitter import beam_azimuth_at, build_schedule, dwells_illuminating

CFG = RadarConfig()


def test_one_rotation_counts():
    s = build_schedule(CFG, CFG.rotation_period_s)
    assert len(s) == 4000
    ppd = s.pulses_per_dwell()
    assert ppd.size == 445
    assert ppd.sum() == 4000
    # 4000 pulses cannot fill 445 dwells with nine each; five dwells carry eight
    assert set(ppd) == {8, 9} and np.sum(ppd == 8) == 5


def test_first_pulses():
    s = build_schedule(CFG, 0.01)
    assert s.start_s[0] == 0.0
    assert s.start_s[1] == pytest.approx(0.5e-3)
    e = next(iter(s))
    assert e.eirp_dBm == 126.0 and e.width_s == 78e-6


def test_schedule_ordered_and_non_overlapping():
    s = build_schedule(CFG, 1.0)
    gaps = np.diff(s.start_s)
    assert np.all(gaps > s.width_s)
    assert np.all(np.diff(s.dwell) >= 0)


def test_beam_azimuth_examples():
    assert beam_azimuth_at(0.0, CFG) == 0.0
    assert beam_azimuth_at(4.6e-3, CFG) == pytest.approx(0.81)
    assert beam_azimuth_at(CFG.rotation_period_s, CFG) == 0.0
    assert beam_azimuth_at(CFG.rotation_period_s + 4.6e-3, CFG) == pytest.approx(0.81)
    with pytest.raises(ValueError):
        beam_azimuth_at(-1.0, CFG)


def test_dwell_boundary_snaps():
    # exactly one dwell in: second beam position, not float-rounded back
    assert beam_azimuth_at(CFG.dwell_s, CFG) == pytest.approx(0.81)


def test_dwells_illuminating_examples():
    assert 10 in dwells_illuminating(8.1, 0.03, CFG)
    hits = dwells_illuminating(8.5, 0.03, CFG)
    assert 2 <= len(hits) <= 3
    assert dwells_illuminating(8.5, 0.001, CFG) == []


@given(st.floats(min_value=-180, max_value=180), st.floats(min_value=0.005, max_value=0.2))
def test_illumination_is_one_consecutive_run(az, footprint):
    hits = dwells_illuminating(az, footprint, CFG)
    if len(hits) <= 1:
        return
    n = CFG.beam_positions
    # consecutive modulo n: exactly one gap when walking the circle
    steps = [(b - a) % n for a, b in zip(hits, hits[1:] + hits[:1])]
    assert sum(1 for s in steps if s != 1) == 1


def test_timing_offset_shifts_train():
    s = build_schedule(RadarConfig(timing_offset_s=1e-4), 0.01)
    assert s.start_s[0] == pytest.approx(1e-4)


def test_duty_cycle():
    assert CFG.duty_cycle == pytest.approx(0.156)
