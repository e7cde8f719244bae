"""Radar-to-LTE uplink coexistence simulator.

A rotating S-band radar illuminates a 3.5 GHz TDD LTE network; this
package models the radar emission, the radar-to-eNB path loss, and the
resulting loss of uplink throughput for macro and small-cell deployments.
"""

from .config import Scenario, ScenarioError, load_scenario, load_scenario_file
from .scenario import run_pair, run_sweep

__all__ = ["Scenario", "ScenarioError", "load_scenario", "load_scenario_file", "run_pair", "run_sweep"]
__version__ = "0.1.0"
