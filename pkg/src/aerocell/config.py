"""Scenario/simulation configuration, defaults file and override layering.

Precedence, lowest first: JSON file, ``AEROCELL_*`` environment variables,
explicit ``key=value`` overrides. Keys are dotted paths into the config
tree, e.g. ``pv.N_PV_p=10`` or ``AEROCELL_RIS__P_PSH_UNITS=mw``.
"""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .atmosphere import AtmoConstants, SitePosition
from .battery import BatteryConfig
from .cell_plan import LinkBudgetParams, Position
from .errors import ConfigError
from .power_models import MimoConfig, RisConfig, UavAirframe
from .pv_harvest import PvConfig

ENV_PREFIX = "AEROCELL_"


class SeasonDay(BaseModel):
    """One simulated day: either a weather CSV or synthetic clear-sky parameters."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    day_of_year: int = Field(ge=1, le=366)
    weather_csv: str | None = None
    clear_sky_irradiance: float = Field(1000.0, ge=0)
    T_day: float = 15.0
    T_night: float = 5.0
    p_0: float = 101325.0


def _paper_days():
    return (
        SeasonDay(name="vernal_equinox", day_of_year=79, T_day=10.0, T_night=0.0, p_0=101600.0),
        SeasonDay(name="summer_solstice", day_of_year=172, T_day=25.0, T_night=14.0, p_0=101300.0),
        SeasonDay(name="autumn_equinox", day_of_year=266, T_day=18.0, T_night=8.0, p_0=101700.0),
        SeasonDay(name="winter_solstice", day_of_year=355, T_day=2.0, T_night=-4.0, p_0=101900.0),
    )


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    bounds: tuple[float, float, float, float] = (0.0, 0.0, 1500.0, 1500.0)
    base_stations: tuple[Position, ...] = ()
    n_users: int = Field(100, ge=0)
    demand_dl: float = Field(100.0, gt=0)
    ue_height: float = 1.5
    k_max: int = Field(25, ge=1)


class SimConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    step_s: float = Field(60.0, gt=0)
    runs: int = Field(10, ge=1)
    res_enabled: bool = True
    seed: int = Field(2022, ge=0)
    latitude: float = Field(52.4, ge=-90, le=90)
    days: tuple[SeasonDay, ...] = Field(default_factory=_paper_days)
    threads: int = Field(1, ge=1)
    max_gap_s: float = Field(3600.0, gt=0)


class Config(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    airframe: UavAirframe = UavAirframe()
    mimo: MimoConfig = MimoConfig()
    ris: RisConfig = RisConfig()
    pv: PvConfig = PvConfig()
    battery: BatteryConfig = BatteryConfig()
    atmosphere: AtmoConstants = AtmoConstants()
    site: SitePosition = SitePosition()
    link_budget: LinkBudgetParams = LinkBudgetParams()
    scenario: ScenarioConfig = ScenarioConfig()
    simulation: SimConfig = SimConfig()


def paper_defaults_path():
    return resources.files("aerocell") / "data" / "paper_defaults.json"


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _set_dotted(tree, key, value):
    parts = key.split(".")
    node = tree
    for part in parts[:-1]:
        nxt = node.get(part)
        if nxt is None:
            nxt = node[part] = {}
        if not isinstance(nxt, dict):
            raise ConfigError(f"cannot override '{key}': '{part}' is not a section")
        node = nxt
    node[parts[-1]] = value


def _canonical_key(key):
    """Map a case-insensitive dotted key onto the schema's field names."""
    model = Config
    out = []
    for i, part in enumerate(key.split(".")):
        if model is None:
            raise ConfigError(f"unknown config key '{key}'")
        names = {n.lower(): n for n in model.model_fields}
        name = names.get(part.lower())
        if name is None:
            raise ConfigError(f"unknown config key '{key}'")
        out.append(name)
        ann = model.model_fields[name].annotation
        model = ann if isinstance(ann, type) and issubclass(ann, BaseModel) else None
    return ".".join(out)


def env_overrides(environ=None):
    """``AEROCELL_SECTION__FIELD=value`` pairs as dotted overrides."""
    environ = os.environ if environ is None else environ
    out = {}
    for name, value in environ.items():
        if name.startswith(ENV_PREFIX) and "__" in name:
            key = name[len(ENV_PREFIX):].replace("__", ".")
            out[key] = value
    return out


def build_config(data=None, overrides=None, environ=None):
    """Validate ``data`` (a dict) after applying env and explicit overrides."""
    tree = json.loads(json.dumps(data or {}))
    layered = list(env_overrides(environ).items())
    if overrides:
        items = overrides.items() if isinstance(overrides, dict) else overrides
        layered += list(items)
    for key, value in layered:
        if isinstance(value, str):
            value = _parse_value(value)
        _set_dotted(tree, _canonical_key(key), value)
    try:
        return Config.model_validate(tree)
    except ValidationError as exc:
        raise ConfigError(_format_validation(exc)) from None


def _format_validation(exc):
    lines = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err["loc"])
        lines.append(f"{loc}: {err['msg']}")
    return "invalid configuration:\n  " + "\n  ".join(lines)


def load_config(path=None, overrides=None, environ=None):
    """Load a JSON config file (bundled defaults when ``path`` is None)."""
    source = Path(path) if path is not None else paper_defaults_path()
    try:
        text = source.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {source}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: invalid JSON ({exc})") from None
    data.pop("_comment", None)
    for section in data.values():
        if isinstance(section, dict):
            section.pop("_comment", None)
    return build_config(data, overrides, environ)


def config_diff(cfg, reference=None):
    """Leaf values of ``cfg`` that differ from ``reference`` (bundled defaults)."""
    reference = reference or load_config()
    a, b = cfg.model_dump(mode="json"), reference.model_dump(mode="json")
    diffs = []

    def walk(x, y, prefix):
        if isinstance(x, dict) and isinstance(y, dict):
            for k in x:
                walk(x[k], y.get(k), f"{prefix}.{k}" if prefix else k)
        elif x != y:
            diffs.append((prefix, y, x))

    walk(a, b, "")
    return diffs
