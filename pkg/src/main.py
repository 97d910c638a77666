#!/usr/bin/env python3
"""
Crane Shortcut Toolkit - Main Entry Point

Shortcut and minimal-consumption transport protocols for an overhead crane:
- design polynomial shortcut protocols
- simulate the exact and small-oscillation load dynamics
- engine power and energy consumption with a braking parameter eta
- Pontryagin-optimal protocol and consumption bounds
- large-angle excitation scans and optimization

Usage:
    sta-crane <subcommand> scenario.yaml [-o output] [--charts] [--plot-script]
    sta-crane run scenario.yaml          # subcommand from the scenario's `command` key
"""

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

import yaml
from loguru import logger

from .errors import ConfigError, PhysicsError

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3

# Configure logging
logger.remove()
logger.add(sys.stderr, format=LOG_FORMAT, level="INFO")


def load_config(config_path: Optional[str] = None) -> dict:
    """Load application configuration from YAML file"""
    if config_path is None:
        config_path = str(Path(__file__).parent.parent / "config" / "config.yaml")

    if not os.path.exists(config_path):
        logger.warning(f"Config file not found: {config_path}, using defaults")
        return {}

    with open(config_path, "r") as f:
        try:
            config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            raise ConfigError(
                f"invalid YAML in {config_path}: {getattr(e, 'problem', e)}",
                line=mark.line + 1 if mark is not None else None,
            ) from e

    logger.info(f"Loaded configuration from {config_path}")
    return config or {}


def configure_logging(level: str, log_format: str, verbose: bool = False) -> None:
    """Route logs to stderr so summaries and CSV paths on stdout stay clean"""
    logger.remove()
    logger.add(sys.stderr, format=log_format, level="DEBUG" if verbose else level)


def build_parser() -> argparse.ArgumentParser:
    from .scenario import ScenarioCommand

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("scenario", help="Scenario file (flat YAML key: value lines)")
    common.add_argument(
        "--output", "-o", type=str, default=None,
        help="Output directory for CSV files (default: output.dir from config)",
    )
    common.add_argument(
        "--config", "-c", type=str, default=None,
        help="Path to configuration file (default: config/config.yaml)",
    )
    common.add_argument("--charts", action="store_true", help="Render PNG charts")
    common.add_argument(
        "--plot-script", action="store_true", help="Write a standalone plot script next to each CSV"
    )
    common.add_argument("--verbose", "-v", action="store_true", help="Enable verbose logging")

    parser = argparse.ArgumentParser(
        prog="sta-crane",
        description="Shortcut and minimal-consumption transport protocols for an overhead crane",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    helps = {
        ScenarioCommand.DESIGN: "Design the protocol and emit its samples",
        ScenarioCommand.SIMULATE: "Simulate the load and write the trace",
        ScenarioCommand.POWER: "Write the engine power trace",
        ScenarioCommand.CONSUMPTION: "Energy consumption for the configured eta",
        ScenarioCommand.ENERGY_MAP: "Consumption over an M x gamma grid",
        ScenarioCommand.OPTIMAL: "Minimal-consumption protocol and bound report",
        ScenarioCommand.BOUNDS: "Consumption bounds and peak-power diagnostics",
        ScenarioCommand.EXCITATION_SCAN: "Final load excitation versus initial angle",
        ScenarioCommand.OPTIMIZE_ANGLES: "Optimize free coefficients for target angles",
    }
    for command, text in helps.items():
        subparsers.add_parser(command.value, parents=[common], help=text)
    subparsers.add_parser("run", parents=[common], help="Use the scenario's `command` key")
    return parser


def run_scenario(
    command: Optional[str],
    scenario_path: str,
    output_dir: Optional[str] = None,
    config_path: Optional[str] = None,
    charts: bool = False,
    plot_script: bool = False,
    verbose: bool = False,
):
    """
    Load configuration and scenario, then run one subcommand

    Args:
        command: Subcommand name, or None for the scenario's own
        scenario_path: Scenario file
        output_dir: Directory for CSV output
        config_path: Application configuration file
        charts: Render PNG charts
        plot_script: Write standalone plot scripts
        verbose: DEBUG logging

    Returns:
        RunOutput of the subcommand
    """
    from .scenario import AppSettings, ScenarioCommand, ScenarioRunner, load_scenario

    settings = AppSettings.from_dict(load_config(config_path))
    configure_logging(settings.logging.level, settings.logging.format, verbose)

    scenario = load_scenario(scenario_path)
    runner = ScenarioRunner(
        scenario,
        settings=settings,
        output_dir=output_dir,
        name=Path(scenario_path).stem,
    )
    return runner.run(
        ScenarioCommand(command) if command else None,
        charts=charts,
        plot_script=plot_script,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    from .scenario import format_summary

    args = build_parser().parse_args(argv)
    if args.verbose:
        logger.remove()
        logger.add(sys.stderr, format=LOG_FORMAT, level="DEBUG")

    try:
        output = run_scenario(
            command=None if args.command == "run" else args.command,
            scenario_path=args.scenario,
            output_dir=args.output,
            config_path=args.config,
            charts=args.charts,
            plot_script=args.plot_script,
            verbose=args.verbose,
        )
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except PhysicsError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_PHYSICS
    except KeyboardInterrupt:
        logger.info("Run cancelled by user")
        return 1

    print(format_summary(f"{Path(args.scenario).stem}: {output.command.value}", output.summary))
    for path in output.files:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
