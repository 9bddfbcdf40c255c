import math
import os
from pathlib import Path

import pytest

import hribench

SRC = Path(os.environ.get("HRIBENCH_SOURCE_DIR", Path(__file__).resolve().parents[2]))


def test_kinematics_round_trip():
    w = hribench.inverse_kinematics(3.0, -4.0, 0.2)
    vx, vy, omega = hribench.forward_kinematics(*w)
    assert (vx, vy, omega) == pytest.approx((3.0, -4.0, 0.2), abs=1e-9)


def test_motion_table():
    assert hribench.wheel_pattern("+N") == (0.0, 1.0, -1.0)
    vx, vy, omega = hribench.forward_kinematics(*hribench.wheel_pattern("+N"))
    assert abs(omega) < 1e-12
    assert math.degrees(math.atan2(vy, vx)) == pytest.approx(0.0, abs=1e-9)
    x, y = hribench.hex_direction("+M")
    assert math.degrees(math.atan2(y, x)) == pytest.approx(60.0)
    with pytest.raises(hribench.HribenchError):
        hribench.wheel_pattern("+Q")


def test_calibration():
    rows = hribench.read_calibration_csv(SRC / "data" / "table3.csv")
    assert len(rows) == 12
    assert 0.0195 <= hribench.calibrate_speed(rows) <= 0.0200
    with pytest.raises(hribench.HribenchError):
        hribench.calibrate_speed([])


def test_sensing_and_arm():
    readings = hribench.sense((0.0, 0.0, 0.0), [(100.0, 0.0, 15.0)])
    assert len(readings) == 6
    assert readings[0] == pytest.approx(60.0, abs=0.3)
    assert readings[3] is None
    assert hribench.coverage_fraction() == 0.5
    assert hribench.react_to_sensor(1) == (90.0, 45.0)
    assert hribench.default_pose() == (90.0, 90.0)
    assert math.hypot(*hribench.tip_offset(90.0, 45.0)) <= 15.0


def test_policy_step():
    readings = [40.0, None, None, None, None, None]
    cmd, phase, latched = hribench.policy_step("alg1", readings)
    assert cmd == {"arm": (90.0, 45.0), "base": None}
    assert (phase, latched) == ("arm_reacted", 1)
    cmd, phase, _ = hribench.policy_step("alg1", readings, phase, latched)
    assert cmd["base"] == "-N" and phase == "base_engaged"
    cmd, phase, latched = hribench.policy_step("alg2", readings)
    assert cmd == {"arm": None, "base": "-N"}
    assert hribench.escape_direction(1) == "-N"


def test_run_scenario_and_replay():
    r = hribench.run_scenario(SRC / "scenarios" / "gap_crossing.toml")
    assert len(r.trace) == 160
    assert r.trace[0]["step"] == 1
    assert r.metrics["missed_detections"] >= 1
    assert hribench.compute_metrics(r.jsonl, r.params) == r.metrics
    again = hribench.run_scenario(SRC / "scenarios" / "gap_crossing.toml")
    assert again.jsonl == r.jsonl


def test_scenario_dicts():
    s = hribench.parse_scenario_toml(
        'name = "mini"\nduration_ms = 500\n[[pedestrians]]\nwaypoints = [[0, 80.0, 0.0], [500, 60.0, 0.0]]\n'
    )
    assert s["policy"] == "alg1"
    a = hribench.run_scenario(s, policy="alg2")
    assert len(a.trace) == 10
    bad = dict(s, duration_ms=600)
    with pytest.raises(hribench.HribenchError):
        hribench.run_scenario(bad)
