"""Command-line harness: reproducible experiment runs from JSON configs.

Usage:

    wgdetect <experiment> [--config cfg.json] [--out dir] [--seed u64]
                          [--threads n] [--no-plot]

Each experiment has complete built-in defaults; a config file overrides any
subset of them and is validated against the JSON schema shipped with the
package (wgdetect/schemas/runconfig.schema.json).  Identical configurations
produce byte-identical results.csv files.
"""

from __future__ import annotations

import argparse
import copy
import json
import sys
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .experiments import RUNNERS, run

CONFIG_EXIT = 2

_COMMON = {
    "geometry": "mirror",
    "lattice": 1.0,
    "purcell": 10.0,
    "gamma_1d": 1.0,
    "n_realizations": 150,
    "master_seed": 20260809,
    "threads": 1,
    "plot": True,
}

DEFAULTS = {
    "fig2a": {
        **_COMMON,
        "N": [10, 25, 50, 100, 200],
        "sigma": [0.01, 0.08, 0.2],
        "strategies": ["fixed_amc"],
        "out_dir": "runs/fig2a",
    },
    "fig2b": {
        **_COMMON,
        "N": [10, 25, 50, 100, 200],
        "sigma": [0.1, 1.0],
        "strategies": ["ensemble_mean", "characterized"],
        "out_dir": "runs/fig2b",
    },
    "fig2c": {
        **_COMMON,
        "N": [200],
        "sigma": [1.0],
        "mode_indices": [0, 1, 2, 3],
        "omega_grid": {"points": 601, "span": 3.0},
        "out_dir": "runs/fig2c",
    },
    "infinite-scan": {
        **_COMMON,
        "geometry": "infinite",
        "N": [5, 10, 20, 40, 80],
        "sigma": [0.0, 0.1],
        "spacings": [0.25, 1.0],
        "lattice": 0.25,
        "out_dir": "runs/infinite-scan",
    },
    "eigen-scaling": {
        **_COMMON,
        "geometry": "infinite",
        "N": [10, 20, 40, 80, 160],
        "sigma": [0.0],
        "spacings": [1.0, 0.5, 0.25, 0.1, "random"],
        "n_realizations": 12,
        "out_dir": "runs/eigen-scaling",
    },
    "chiral-sweep": {
        **_COMMON,
        "gamma_ratios": [0.01, 0.02, 0.04, 0.08, 0.16, 0.32],
        "chiral": {"gamma_plus": 1.0, "gamma_eng": 1.0, "gamma_free": 0.1},
        "out_dir": "runs/chiral-sweep",
    },
    "levels-report": {
        **_COMMON,
        "levels": {
            "omega1": 0.1, "omega2": 0.4, "delta1": 20.0, "delta2": 25.0,
            "gamma_g": 1.0, "gamma_s": 1.0, "gamma_1e": 0.02, "gamma_2e": 0.02,
        },
        "threshold": 0.1,
        "nonlinearity": {"m": 2, "n_atoms": 20},
        "out_dir": "runs/levels-report",
    },
    "amc-analytic": {
        **_COMMON,
        "N": [20],
        "out_dir": "runs/amc-analytic",
    },
    "selftest": {**_COMMON, "out_dir": "runs/selftest"},
}


class ConfigError(Exception):
    pass


def load_schema() -> dict:
    text = resources.files("wgdetect.schemas").joinpath("runconfig.schema.json").read_text()
    return json.loads(text)


def validate_config(config: dict, source: str = "<config>") -> None:
    """Schema-validate a config dict, raising ConfigError with the JSON path."""
    schema = load_schema()
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        lines = []
        for err in errors:
            where = "$" + "".join(
                f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path
            )
            lines.append(f"{source}: {where}: {err.message}")
        raise ConfigError("\n".join(lines))


def load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"{path}: {err}") from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from err
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top-level JSON value must be an object")
    validate_config(data, source=path)
    return data


def resolve_config(experiment: str, user_config: dict | None = None) -> dict:
    """Built-in defaults for ``experiment`` overridden by ``user_config``."""
    config = copy.deepcopy(DEFAULTS[experiment])
    config["experiment"] = experiment
    if user_config:
        declared = user_config.get("experiment", experiment)
        if declared != experiment:
            raise ConfigError(
                f"config declares experiment {declared!r} but {experiment!r} was requested"
            )
        for key, value in user_config.items():
            if isinstance(value, dict) and isinstance(config.get(key), dict):
                config[key] = {**config[key], **value}
            else:
                config[key] = copy.deepcopy(value)
    validate_config(config)
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wgdetect",
        description="Atom-array waveguide photon-detector experiments",
    )
    parser.add_argument("--version", action="version", version=f"wgdetect {__version__}")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in RUNNERS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="master seed (overrides config)")
        p.add_argument("--threads", type=int, help="parallel workers over realizations")
        p.add_argument("--no-plot", action="store_true", help="skip plot.svg")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        user = load_config(args.config) if args.config else None
        config = resolve_config(args.experiment, user)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be >= 0")
            config["master_seed"] = args.seed
        if args.out is not None:
            config["out_dir"] = args.out
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("--threads must be >= 1")
            config["threads"] = args.threads
        if args.no_plot:
            config["plot"] = False
    except ConfigError as err:
        print(f"config error:\n{err}", file=sys.stderr)
        return CONFIG_EXIT

    try:
        out = run(
            config,
            config["out_dir"],
            threads=config["threads"],
            plot=config["plot"],
        )
    except Exception as err:  # noqa: BLE001 - report and signal failure
        print(f"error: {err}", file=sys.stderr)
        return 1
    if args.experiment != "selftest":
        print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
