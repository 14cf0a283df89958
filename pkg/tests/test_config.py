"""INI configuration loading, overrides, hashing."""

import numpy as np
import pytest

from oddflow.config import (
    ConfigError,
    config_hash,
    config_text,
    load_config,
    scenario_spec,
    solver_config,
)


def test_defaults_build_valid_objects():
    parser = load_config(None)
    cfg = solver_config(parser)
    assert cfg.n == 64
    assert cfg.formulation == "elsasser"
    spec = scenario_spec(parser)
    assert spec.name == "taylor_green"
    assert spec.bump_mode == (1, 1)


def test_file_and_overrides(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text("[grid]\nn = 32\n\n[physics]\nnu0 = 0.25\n")
    parser = load_config(path, ["time.t_end=2.5", "scenario.bump_mode=2,1"])
    cfg = solver_config(parser)
    assert cfg.n == 32
    assert cfg.nu0 == 0.25
    assert cfg.t_end == 2.5
    assert scenario_spec(parser).bump_mode == (2, 1)


def test_override_syntax_errors():
    with pytest.raises(ConfigError):
        load_config(None, ["t_end=2.5"])  # no section
    with pytest.raises(ConfigError):
        load_config(None, ["time.t_end"])  # no value


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/path.ini")


def test_bad_values_rejected():
    with pytest.raises(ConfigError):
        solver_config(load_config(None, ["grid.n=not_a_number"]))
    with pytest.raises(ConfigError):
        scenario_spec(load_config(None, ["scenario.bump_mode=a,b"]))
    with pytest.raises(ValueError):
        solver_config(load_config(None, ["physics.formulation=implicit"]))


def test_seed_override_wins():
    parser = load_config(None, ["scenario.seed=17"])
    assert scenario_spec(parser).seed == 17
    assert scenario_spec(parser, seed=99).seed == 99


def test_hash_tracks_content():
    a = load_config(None)
    b = load_config(None, ["time.t_end=2.0"])
    assert config_hash(a) != config_hash(b)
    assert config_hash(a) == config_hash(load_config(None))
    assert "[time]" in config_text(a)
