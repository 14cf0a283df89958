"""Flat INI configuration: sections [grid], [physics], [time], [scenario], [output]."""

from __future__ import annotations

import configparser
import hashlib
from pathlib import Path

from .dynamics import SolverConfig
from .scenarios import ScenarioSpec

DEFAULTS = {
    "grid": {"n": "64", "L": "6.283185307179586"},
    "physics": {
        "nu0": "0.1", "formulation": "elsasser", "rho_floor": "1e-6",
        "pressure_rtol": "1e-10", "pressure_max_iters": "500",
    },
    "time": {
        "t_end": "1.0", "dt_max": "0.05", "cfl_adv": "0.5", "cfl_odd": "1.0",
        "reproject_every": "1", "sample_every": "1",
    },
    "scenario": {
        "family": "taylor_green", "amplitude": "1.0", "epsilon": "0.1",
        "bump_mode": "1,1", "seed": "0", "spectrum_slope": "-2.0",
        "spectrum_cutoff": "8.0",
    },
    "output": {"snapshots": "initial,final"},
}


class ConfigError(ValueError):
    pass


def load_config(path: str | Path | None,
                overrides: list[str] = ()) -> configparser.ConfigParser:
    """Parse an INI file (optional) and apply `section.key=value` overrides."""
    parser = configparser.ConfigParser()
    parser.read_dict(DEFAULTS)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override must look like section.key=value: {item!r}")
        key, value = item.split("=", 1)
        section, option = key.split(".", 1)
        if section not in parser:
            parser[section] = {}
        parser[section][option.strip()] = value.strip()
    return parser


def config_text(parser: configparser.ConfigParser) -> str:
    lines = []
    for section in sorted(parser.sections()):
        lines.append(f"[{section}]")
        for key in sorted(parser[section]):
            lines.append(f"{key}={parser[section][key]}")
    return "\n".join(lines) + "\n"


def config_hash(parser: configparser.ConfigParser) -> str:
    return hashlib.sha256(config_text(parser).encode()).hexdigest()


def solver_config(parser: configparser.ConfigParser) -> SolverConfig:
    try:
        return SolverConfig(
            formulation=parser["physics"]["formulation"],
            n=parser.getint("grid", "n"),
            L=parser.getfloat("grid", "L"),
            nu0=parser.getfloat("physics", "nu0"),
            cfl_adv=parser.getfloat("time", "cfl_adv"),
            cfl_odd=parser.getfloat("time", "cfl_odd"),
            t_end=parser.getfloat("time", "t_end"),
            dt_max=parser.getfloat("time", "dt_max"),
            reproject_every=parser.getint("time", "reproject_every"),
            rho_floor=parser.getfloat("physics", "rho_floor"),
            pressure_rtol=parser.getfloat("physics", "pressure_rtol", fallback=1e-10),
            pressure_max_iters=parser.getint("physics", "pressure_max_iters",
                                             fallback=500),
        )
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad solver configuration: {exc}") from exc


def scenario_spec(parser: configparser.ConfigParser,
                  seed: int | None = None) -> ScenarioSpec:
    sec = parser["scenario"]
    try:
        mode = tuple(int(v) for v in sec.get("bump_mode", "1,1").split(","))
        return ScenarioSpec(
            name=sec.get("family", "taylor_green"),
            amplitude=float(sec.get("amplitude", "1.0")),
            epsilon=float(sec.get("epsilon", "0.0")),
            bump_mode=mode,  # type: ignore[arg-type]
            seed=seed if seed is not None else int(sec.get("seed", "0")),
            spectrum_slope=float(sec.get("spectrum_slope", "-2.0")),
            spectrum_cutoff=float(sec.get("spectrum_cutoff", "8.0")),
        )
    except ValueError as exc:
        raise ConfigError(f"bad scenario configuration: {exc}") from exc
