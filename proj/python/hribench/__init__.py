"""Python access to the hribench simulation core.

Kinematics, sensing, arm and policy helpers come straight from the native
module. Scenarios are plain dicts in the same layout as the JSON scenario files.
"""

import json
from pathlib import Path

from ._core import (
    BaseGeometry,
    HribenchError,
    SensorConfig,
    calibrate_speed,
    coverage_fraction,
    default_pose,
    escape_direction,
    forward_kinematics,
    hex_direction,
    inverse_kinematics,
    policy_step,
    react_to_sensor,
    read_calibration_csv,
    sense,
    tip_offset,
    wheel_pattern,
)
from . import _core

__all__ = [
    "BaseGeometry",
    "HribenchError",
    "RunResult",
    "SensorConfig",
    "calibrate_speed",
    "compute_metrics",
    "coverage_fraction",
    "default_pose",
    "escape_direction",
    "forward_kinematics",
    "hex_direction",
    "inverse_kinematics",
    "load_scenario",
    "parse_scenario_toml",
    "policy_step",
    "react_to_sensor",
    "read_calibration_csv",
    "run_scenario",
    "sense",
    "tip_offset",
    "wheel_pattern",
]


class RunResult:
    """Trace records (dicts, one per step), safety metrics and the trace as JSONL."""

    def __init__(self, jsonl, metrics, params):
        self.jsonl = jsonl
        self.trace = [json.loads(line) for line in jsonl.splitlines()]
        self.metrics = metrics
        self.params = params


def load_scenario(path):
    """Reads a .toml or .json scenario file into a dict."""
    return json.loads(_core.load_scenario_json(Path(path)))


def parse_scenario_toml(text):
    return json.loads(_core.toml_scenario_to_json(text))


def run_scenario(scenario, policy=None):
    """Runs a scenario dict, or a path to a scenario file."""
    if not isinstance(scenario, dict):
        scenario = load_scenario(scenario)
    if policy is not None:
        scenario = dict(scenario, policy=policy)
    jsonl, metrics, params = _core.run_scenario_json(json.dumps(scenario))
    return RunResult(jsonl, json.loads(metrics), json.loads(params))


def compute_metrics(trace_jsonl, params):
    """Recomputes safety metrics from trace JSONL text."""
    return json.loads(_core.compute_metrics_json(trace_jsonl, json.dumps(params)))
