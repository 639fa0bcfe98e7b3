"""Build the RunConfig of a command from its config file and flags."""
from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import logging
import os
from typing import Any, Callable, Dict, List, Optional, Tuple

import consts
import exceptions
from grids import GridSpec
from phase_types import OutputFormat

logger = logging.getLogger(__name__)


def _int_list(text: str) -> List[int]:
    return [int(part) for part in str(text).split(",") if part.strip()]


def _bool(text: str) -> bool:
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


MODEL_KEYS: Dict[str, Callable[[str], Any]] = {
    "gamma": float,
    "lambda": float,
    "h": float,
    "N": _int_list,
    "L": _int_list,
    "model": str,
    "state": str,
    "input": str,
    "D": int,
    "mu": float,
    "theta": float,
    "steps": int,
    "M": int,
    "x": str,
    "y": str,
    "log_x": _bool,
}
GRID_KEYS = ("gamma", "lambda", "h", "L", "N", "mu")
OUTPUT_KEYS: Dict[str, Callable[[str], Any]] = {
    "out": str,
    "format": str,
    "check": _bool,
    "jobs": int,
    "seed": int,
}

# axis a bare `--grid a:b:n` applies to
PRIMARY_AXIS = {
    "xy-scan": "lambda",
    "scaling": "L",
    "xxz": "lambda",
    "lmg": "h",
    "rgflow": "lambda",
    "mps": "mu",
}


class RunConfig:
    def __init__(
        self,
        command: str,
        model: Dict[str, Any],
        grids: Dict[str, GridSpec],
        out: Optional[str] = None,
        fmt: OutputFormat = OutputFormat.CSV,
        check: bool = False,
        jobs: int = 1,
        seed: int = 0,
    ):
        if jobs < 1:
            raise exceptions.ConfigError("jobs must be at least 1")
        self.command = command
        self.model = model
        self.grids = grids
        self.out = out
        self.fmt = fmt
        self.check = check
        self.jobs = jobs
        self.seed = seed

    def get(self, key: str, default: Any = None) -> Any:
        return self.model.get(key, default)

    def grid(self, key: str, default: Optional[GridSpec] = None) -> GridSpec:
        """Grid for `key`, else the scalar model value, else `default`."""
        if key in self.grids:
            return self.grids[key]
        if key in self.model:
            value = self.model[key]
            return GridSpec(value if isinstance(value, list) else [value])
        if default is None:
            raise exceptions.ConfigError(f"{self.command} needs a value or grid for {key!r}")
        return default

    def as_dict(self) -> Dict[str, Any]:
        """Everything that can change the numbers; the output path and job count cannot."""
        return {
            "command": self.command,
            "model": {key: self.model[key] for key in sorted(self.model)},
            "grid": {key: self.grids[key].values.tolist() for key in sorted(self.grids)},
            "format": self.fmt.value,
            "check": self.check,
            "seed": self.seed,
        }

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def _convert(table: Dict[str, Callable[[str], Any]], key: str, value: Any, where: str) -> Any:
    if key not in table:
        raise exceptions.ConfigError(f"unknown key {key!r} in {where}")
    try:
        return table[key](value)
    except (TypeError, ValueError) as exc:
        raise exceptions.ConfigError(f"bad value {value!r} for {key!r} in {where}: {exc}") from exc


def load_config(path: str) -> Tuple[Dict[str, Any], Dict[str, GridSpec], Dict[str, Any]]:
    """Read the [model], [grid] and [output] sections of an INI file."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys such as N and L are case sensitive
    try:
        with open(path, encoding="utf-8") as f:
            parser.read_file(f)
    except OSError as exc:
        raise exceptions.ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise exceptions.ConfigError(f"malformed config {path}: {exc}") from exc

    unknown = set(parser.sections()) - {"model", "grid", "output"}
    if unknown:
        raise exceptions.ConfigError(f"unknown sections {sorted(unknown)} in {path}")
    model, grids, output = {}, {}, {}
    if parser.has_section("model"):
        for key, value in parser.items("model"):
            model[key] = _convert(MODEL_KEYS, key, value, f"{path} [model]")
    if parser.has_section("grid"):
        for key, value in parser.items("grid"):
            if key not in GRID_KEYS:
                raise exceptions.ConfigError(f"unknown key {key!r} in {path} [grid]")
            grids[key] = GridSpec.parse(value)
    if parser.has_section("output"):
        for key, value in parser.items("output"):
            output[key] = _convert(OUTPUT_KEYS, key, value, f"{path} [output]")
    return model, grids, output


def _default_jobs() -> int:
    text = os.environ.get("SPINLAB_JOBS")
    if not text:
        return 1
    try:
        return int(text)
    except ValueError:
        raise exceptions.ConfigError(f"SPINLAB_JOBS must be an integer, got {text!r}") from None


def new_run(args: argparse.Namespace) -> RunConfig:
    """Overlay command line flags on the config file values."""
    model, grids, output = load_config(args.config) if getattr(args, "config", None) else ({}, {}, {})
    for key in MODEL_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            model[key] = _convert(MODEL_KEYS, key, value, "command line")
    for text in getattr(args, "grid", None) or []:
        key, _, spec = text.rpartition("=")
        key = key or PRIMARY_AXIS.get(args.command)
        if key not in GRID_KEYS:
            raise exceptions.ConfigError(f"no grid axis {key!r} for {args.command}")
        grids[key] = GridSpec.parse(spec)
    for key in OUTPUT_KEYS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            output[key] = value

    try:
        fmt = OutputFormat(output.get("format", consts.DEFAULT_FORMAT))
    except ValueError:
        raise exceptions.ConfigError(f"unknown output format {output.get('format')!r}") from None
    config = RunConfig(
        command=args.command,
        model=model,
        grids=grids,
        out=output.get("out"),
        fmt=fmt,
        check=bool(output.get("check", False)),
        jobs=_default_jobs() if output.get("jobs") is None else output["jobs"],
        seed=output.get("seed", 0),
    )
    logger.info("run %s config=%s", config.command, config.config_hash)
    return config
