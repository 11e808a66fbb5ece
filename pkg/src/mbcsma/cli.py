import argparse
import logging
import os
import re
import sys
from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import yaml
from dotenv import load_dotenv
from haystack import logging as haystack_logging

from mbcsma.components.sweep.planner import OutputFormat, SweepSpec, plan_sweep
from mbcsma.errors import ConfigurationError
from mbcsma.phy.params import PhyParams
from mbcsma.pipelines.sweep.sweep_pipeline import get_sweep_pipeline

logger = haystack_logging.getLogger(__name__)

CONFIG_ENV_VAR = "MBCSMA_CONFIG"

_PHY_FIELDS = {f.name: f for f in fields(PhyParams)}
_LIST_KEYS = ("stations", "bands", "seeds", "spans")
_INT_KEYS = ("cw_min", "cw_max", "duration_exchanges", "warmup", "workers")
_FLOAT_KEYS = ("sim_duration",)
_STR_KEYS = ("scenario", "output", "format", "trace")
_BOOL_KEYS = ("fully_connected", "nav", "post_backoff")
CONFIG_KEYS = frozenset(_LIST_KEYS + _INT_KEYS + _FLOAT_KEYS + _STR_KEYS + _BOOL_KEYS) | frozenset(_PHY_FIELDS)

_RANGE = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


def parse_int_list(value: Any, key: str) -> List[int]:
    """
    Integers from `10,50,100`, `1..10` (inclusive), a mix of both, a single integer or a YAML list.

    :raises ConfigurationError: If an item is not an integer or a range
    """
    if isinstance(value, bool):
        raise ConfigurationError(f"{key} expects integers, got {value!r}", key=key)
    if isinstance(value, int):
        return [value]
    items = value if isinstance(value, list) else str(value).split(",")
    result: List[int] = []
    for item in items:
        if isinstance(item, int) and not isinstance(item, bool):
            result.append(item)
            continue
        text = str(item).strip()
        match = _RANGE.match(text)
        if match:
            lo, hi = int(match.group(1)), int(match.group(2))
            if lo > hi:
                raise ConfigurationError(f"Empty range {text} for {key}", key=key)
            result.extend(range(lo, hi + 1))
            continue
        try:
            result.append(int(text))
        except ValueError:
            raise ConfigurationError(f"{key} expects integers or a..b ranges, got {text!r}", key=key) from None
    if not result:
        raise ConfigurationError(f"{key} must list at least one value", key=key)
    return result


def _coerce(key: str, value: Any) -> Any:
    if key in _LIST_KEYS:
        return parse_int_list(value, key)
    if key in _BOOL_KEYS:
        if not isinstance(value, bool):
            raise ConfigurationError(f"{key} expects true or false, got {value!r}", key=key)
        return value
    if key in _STR_KEYS:
        return str(value)
    try:
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        return _PHY_FIELDS[key].type(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{key} expects a number, got {value!r}", key=key) from None


def load_config_file(path: Path) -> Dict[str, Any]:
    """
    Read a flat YAML mapping of configuration keys.

    :raises ConfigurationError: If the file is missing, not a mapping, or names an unknown key
    """
    try:
        data = yaml.safe_load(path.read_text())
    except FileNotFoundError:
        raise ConfigurationError(f"Config file {path} does not exist", key="config") from None
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Config file {path} is not valid YAML: {e}", key="config") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {path} must hold a mapping of keys", key="config")
    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        raise ConfigurationError(f"Unknown config keys in {path}: {', '.join(unknown)}", key=unknown[0])
    return {key: _coerce(key, value) for key, value in data.items()}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbcsma",
        description="Sweep the multiband RTS/CTS simulator over stations x bands x seeds",
    )
    parser.add_argument("--config", help=f"Flat YAML config file (default: env:{CONFIG_ENV_VAR})")
    parser.add_argument("--scenario", help="saturated, hidden, exposed or pathologic")
    parser.add_argument("--stations", help="Station counts, e.g. 10,50,100")
    parser.add_argument("--bands", help="Band counts, e.g. 1..5")
    parser.add_argument("--seeds", help="Seeds, e.g. 1..10")
    parser.add_argument("--spans", help="RTS band span, or a comma list cycled over stations")
    parser.add_argument("--cw-min", dest="cw_min", type=int)
    parser.add_argument("--cw-max", dest="cw_max", type=int)
    parser.add_argument("--duration-exchanges", dest="duration_exchanges", type=int)
    parser.add_argument("--warmup", type=int, help="Completed exchanges discarded before measuring")
    parser.add_argument("--sim-duration", dest="sim_duration", type=float, help="Stop after this many seconds")
    parser.add_argument("--output")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat])
    parser.add_argument("--trace", help="Directory that receives one event trace per run")
    parser.add_argument("--workers", type=int, help="Worker processes")
    parser.add_argument(
        "--fully-connected", dest="fully_connected", action="store_const", const=True, default=None
    )
    parser.add_argument("--no-nav", dest="nav", action="store_const", const=False, default=None)
    parser.add_argument(
        "--post-backoff",
        dest="post_backoff",
        action="store_const",
        const=True,
        default=None,
        help="Draw a backoff after every acknowledged packet",
    )
    parser.add_argument("--log-level", dest="log_level", default="INFO")
    return parser


def parse_config(argv: Optional[Sequence[str]] = None, config_file: Optional[Path] = None) -> SweepSpec:
    """
    Merge flags over the config file over the built-in defaults.

    :param argv: Command-line arguments without the program name
    :param config_file: Config file used when no `--config` flag is given
    :raises ConfigurationError: If a value is invalid
    """
    args = build_parser().parse_args(argv)
    values: Dict[str, Any] = {}

    path = args.config or config_file or os.getenv(CONFIG_ENV_VAR)
    if path:
        values.update(load_config_file(Path(path)))
        logger.info("Loaded configuration from {path}", path=str(path))

    for key in CONFIG_KEYS - set(_PHY_FIELDS):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = _coerce(key, flag)

    phy = PhyParams(**{key: values.pop(key) for key in list(values) if key in _PHY_FIELDS})
    if "format" in values:
        try:
            values["format"] = OutputFormat(values["format"])
        except ValueError:
            raise ConfigurationError(f"Unknown output format {values['format']!r}", key="format") from None
    if "output" not in values and values.get("format") is OutputFormat.JSON:
        values["output"] = "results.json"
    if "sim_duration" in values and "duration_exchanges" not in values:
        # a duration alone replaces the exchange target
        values["duration_exchanges"] = None
    spec = SweepSpec(phy=phy, **values)
    plan_sweep(spec)
    return spec


def run_sweep(spec: SweepSpec, raise_on_failure: bool = False) -> Dict[str, Any]:
    """
    Execute a sweep through the pipeline and write its tables.

    :return: Dictionary with the written `paths` and the run `errors`
    """
    pipeline = get_sweep_pipeline(
        output_path=spec.output,
        file_format=spec.format.value,
        workers=spec.workers,
        trace_dir=spec.trace,
        raise_on_failure=raise_on_failure,
    )
    logger.info("Running {runs} points of the {scenario} sweep", runs=spec.run_count, scenario=spec.scenario)
    outputs = pipeline.run({"planner": {"spec": spec}}, include_outputs_from={"runner"})
    return {"paths": outputs["writer"]["paths"], "errors": outputs["runner"]["errors"]}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; exit status 0 on success, 1 when a run failed, 2 on a configuration error."""
    load_dotenv()
    log_level = build_parser().parse_known_args(argv)[0].log_level
    logging.basicConfig(level=log_level.upper(), format="%(asctime)s - %(levelname)s - %(message)s")

    try:
        spec = parse_config(argv)
    except ConfigurationError as e:
        print(f"mbcsma: configuration error ({e.key}): {e}", file=sys.stderr)
        return 2

    outputs = run_sweep(spec)
    if outputs["errors"]:
        for error in outputs["errors"]:
            logger.error("{error}", error=error)
        logger.error("Sweep aborted; partial results written to {paths}", paths=", ".join(outputs["paths"]))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
