"""Command-line entry point: resolve a configuration, compare policies, write outputs."""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from src.analysis.compare import dump_config, emit_outputs, run_compare
from src.core.config import settings
from src.core.errors import ConfigurationError
from src.core.logging import configure_logging
from src.schemas.config import ExperimentConfig, build_config
from src.utils.constants import DESK_PRESETS, REFERENCE_PRESETS

# Flag destination -> configuration key
FLAG_KEYS = {
    "steps": "steps",
    "seed": "seed",
    "alpha": "alpha",
    "epsilon": "epsilon",
    "load": "load_fraction",
    "schedulers": "num_schedulers",
    "resources": "num_resources",
    "fail_learner_at": "fail_learner_at",
    "window": "window",
    "replicates": "replicates",
    "arrival_carryover": "arrival_carryover",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Simulate multi-agent Grid job scheduling and compare CLDS with LLS, RS and DMMS"
    )
    parser.add_argument("--preset", choices=REFERENCE_PRESETS + DESK_PRESETS, help="Scenario preset")
    parser.add_argument("--config", type=Path, help="YAML configuration file")
    parser.add_argument("--policy", help="Comma-separated policies, e.g. CLDS,DMMS")
    parser.add_argument("--steps", type=int, help="Number of time steps")
    parser.add_argument("--seed", type=int, help="Master random seed")
    parser.add_argument("--alpha", type=float, help="CLDS learning rate")
    parser.add_argument("--epsilon", type=float, help="CLDS exploration probability")
    parser.add_argument("--load", type=float, help="Offered load as a fraction of capacity")
    parser.add_argument("--schedulers", type=int, help="Number of schedulers")
    parser.add_argument("--resources", type=int, help="Number of resources")
    parser.add_argument("--fail-learner-at", type=int, help="Step at which the CLDS learner fails")
    parser.add_argument("--window", type=int, help="Window width for crossover detection")
    parser.add_argument("--replicates", type=int, help="Number of seeds to repeat the comparison on")
    parser.add_argument(
        "--literal-arrivals",
        dest="arrival_carryover",
        action="store_const",
        const=False,
        help="Fill every step's batch to the full load target instead of carrying overshoot",
    )
    parser.add_argument("--workers", type=int, default=1, help="Processes for the per-policy runs")
    parser.add_argument("--out", type=Path, help=f"Output directory (default: {settings.OUTPUT_DIR})")
    parser.add_argument("--log-level", help=f"Log level (default: {settings.LOG_LEVEL})")
    return parser


def load_presets(path: Optional[Path] = None) -> Dict[str, Dict[str, Any]]:
    """
    Load the preset table.

    Args:
        path: YAML file; defaults to settings.PRESETS_PATH

    Returns:
        Preset name -> configuration values (origin label removed)
    """
    path = Path(path or settings.PRESETS_PATH)
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    return {
        name: {key: value for key, value in values.items() if key != "origin"}
        for name, values in data.items()
    }


def load_config_file(path: Path) -> Dict[str, Any]:
    """
    Read a flat YAML configuration file.

    Raises:
        ConfigurationError: If the file is missing, unreadable or not a mapping
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError as e:
        raise ConfigurationError(f"Config file not found: {path}", field="config") from e
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Config file {path} is not valid YAML: {e}", field="config") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {path} must hold a mapping of keys to values", field="config")
    return data


def parse_config(argv: Optional[List[str]] = None) -> ExperimentConfig:
    """
    Resolve the experiment configuration from command-line flags.

    Precedence: flags over config file over preset over defaults. A preset
    named inside the config file is applied beneath that file's values.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]

    Returns:
        Resolved ExperimentConfig

    Raises:
        ConfigurationError: Naming the offending key and its valid range
    """
    args = build_parser().parse_args(argv)
    return resolve_config(args)


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    file_values = load_config_file(args.config) if args.config else {}
    preset = args.preset or file_values.get("preset")

    values: Dict[str, Any] = {}
    if preset is not None:
        presets = load_presets()
        if preset not in presets:
            raise ConfigurationError(
                f"Unknown preset '{preset}' (valid: {sorted(presets)})", field="preset"
            )
        values.update(presets[preset])
        values["preset"] = preset

    values.update(file_values)
    if args.preset:
        values["preset"] = args.preset

    for dest, key in FLAG_KEYS.items():
        value = getattr(args, dest)
        if value is not None:
            values[key] = value
    if args.policy:
        values["policies"] = [p.strip() for p in args.policy.split(",") if p.strip()]
        values.pop("policy", None)

    return build_config(ExperimentConfig, values)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line.

    Returns:
        0 on success, 2 on a configuration error, 1 on an I/O error
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)

    try:
        config = resolve_config(args)
    except ConfigurationError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"Error reading configuration: {e}", file=sys.stderr)
        return 1

    if args.workers < 1:
        print("Configuration error: --workers must be >= 1", file=sys.stderr)
        return 2
    print(dump_config(config), end="")

    result = run_compare(config, workers=args.workers)
    try:
        emit_outputs(result, args.out or Path(settings.OUTPUT_DIR))
    except OSError as e:
        print(f"Output error: {e}", file=sys.stderr)
        return 1

    for policy, summary in result.report.summaries.items():
        start, end = summary.late_window
        print(
            f"{policy:>5}  late ALoR [{start}, {end}): {summary.late_mean_alor:.4f}  "
            f"messages: {summary.total_messages}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
