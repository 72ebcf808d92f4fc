import json

import pytest

from aerocell.config import build_config, config_diff, env_overrides, load_config, paper_defaults_path
from aerocell.errors import ConfigError


def test_bundled_defaults():
    cfg = load_config()
    assert cfg.battery.E_max == 768.0
    assert cfg.ris.P_PSH_units == "w" and cfg.battery.charge_rule == "capped"
    assert len(cfg.scenario.base_stations) == 8 and cfg.scenario.n_users == 100
    assert cfg.simulation.runs == 10 and cfg.simulation.step_s == 60
    assert config_diff(cfg) == []


def test_file_matches_bundled(tmp_path):
    data = json.loads(paper_defaults_path().read_text())
    p = tmp_path / "c.json"
    p.write_text(json.dumps(data))
    assert load_config(p) == load_config()


def test_layering_order():
    env = {"AEROCELL_SIMULATION__SEED": "5", "AEROCELL_PV__N_PV_P": "7"}
    cfg = load_config(environ=env, overrides={"simulation.seed": "9"})
    assert cfg.simulation.seed == 9
    assert cfg.pv.N_PV_p == 7


def test_env_ignores_other_prefixes():
    env = {"HOME": "/x", "AEROCELL_RIS__P_PSH_UNITS": "mw"}
    assert list(env_overrides(env)) == ["RIS.P_PSH_UNITS"]
    assert load_config(environ=env).ris.P_PSH_units == "mw"


def test_unknown_key():
    with pytest.raises(ConfigError, match="nope"):
        load_config(overrides={"battery.nope": 1})
    with pytest.raises(ConfigError):
        load_config(environ={"AEROCELL_NOPE__X": "1"})


def test_type_checked():
    with pytest.raises(ConfigError, match="runs"):
        load_config(overrides={"simulation.runs": "\"many\""})
    with pytest.raises(ConfigError):
        load_config(overrides={"simulation.runs": 0})


def test_extra_field_in_file(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"pv": {"N_PV_q": 3}}))
    with pytest.raises(ConfigError):
        load_config(p)


def test_empty_document_uses_model_defaults():
    assert build_config({}).battery.E_max == 768.0


def test_diff_lists_changes():
    cfg = load_config(overrides={"mimo.include_lo": True})
    assert ("mimo.include_lo", False, True) in config_diff(cfg)
