"""
Scenario Module - configuration, subcommand execution and CSV output
"""

from .models import (
    AppSettings,
    ProtocolChoice,
    ScenarioCommand,
    ScenarioConfig,
    SweepAxis,
    load_scenario,
    parse_scenario,
)
from .runner import RunOutput, ScenarioRunner, build_protocol, resolve_steps
from .writer import ENERGY_MAP_COLUMNS, SCAN_COLUMNS, TRACE_COLUMNS, format_summary, write_csv

__all__ = [
    "AppSettings",
    "ScenarioConfig",
    "ScenarioCommand",
    "ProtocolChoice",
    "SweepAxis",
    "load_scenario",
    "parse_scenario",
    "ScenarioRunner",
    "RunOutput",
    "build_protocol",
    "resolve_steps",
    "TRACE_COLUMNS",
    "ENERGY_MAP_COLUMNS",
    "SCAN_COLUMNS",
    "format_summary",
    "write_csv",
]
