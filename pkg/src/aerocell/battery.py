"""Battery energy state: efficiency-aware charge/discharge with clamping."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class BatteryConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    E_unit_max: float = Field(768.0, gt=0)
    N_BATT_s: int = Field(1, ge=1)
    N_BATT_p: int = Field(1, ge=1)
    mu_BATT: float = Field(0.95, gt=0, le=1)
    SoC_p: float = Field(0.95, gt=0, le=1)
    DoD_max: float = Field(1.0, gt=0, le=1)
    m_BATT: float = Field(5.2, ge=0)
    V_n: float = Field(12.8, gt=0)
    V_c: float = Field(14.6, gt=0)
    V_d: float = Field(12.8, gt=0)
    I_c: float = Field(30.0, ge=0)
    I_d: float = Field(60.0, ge=0)
    C: float = Field(60.0, gt=0)
    N_BC: int = Field(2000, ge=0)
    # "capped" stores min(dE*mu, headroom); "printed" takes the max of the two,
    # which can overfill the battery.
    charge_rule: Literal["capped", "printed"] = "capped"

    @model_validator(mode="after")
    def _energy_matches_rating(self):
        if not math.isclose(self.E_unit_max, self.V_n * self.C, rel_tol=1e-9):
            raise ValueError(
                f"E_unit_max={self.E_unit_max} Wh differs from V_n*C={self.V_n * self.C} Wh"
            )
        return self

    @property
    def N_BATT(self):
        return self.N_BATT_s * self.N_BATT_p

    @property
    def E_max(self):
        return self.N_BATT * self.E_unit_max

    @property
    def floor(self):
        return (1.0 - self.DoD_max) * self.E_max

    @property
    def E_primary(self):
        return self.SoC_p * self.E_max


@dataclass(frozen=True)
class BatteryState:
    E: float
    E_max: float
    floor: float
    replacements: int = 0
    deficit_flag: bool = False


def initial_state(cfg):
    return BatteryState(E=cfg.E_primary, E_max=cfg.E_max, floor=cfg.floor)


def energy_balance(pb, dt):
    """Energy (Wh) available to the battery over ``dt`` hours; negative means drain."""
    return (pb.p_pv - pb.p_total_dc) * dt


def step_battery(state, dE, cfg):
    """Apply one energy balance ``dE`` (load-side Wh) to ``state``.

    Returns ``(new_state, unmet)`` where ``unmet`` is the load-side energy
    the battery could not deliver.
    """
    mu = cfg.mu_BATT
    if dE > 0:
        stored = dE * mu
        headroom = state.E_max - state.E
        if cfg.charge_rule == "printed":
            E = state.E + max(stored, headroom)
        else:
            E = state.E_max if stored >= headroom else state.E + stored
        return replace(state, E=E, deficit_flag=False), 0.0
    available = state.E - state.floor
    drawn = dE / mu
    if -drawn <= available:
        return replace(state, E=state.E + drawn, deficit_flag=False), 0.0
    unmet = (-drawn - available) * mu
    return replace(state, E=state.floor, deficit_flag=True), unmet


def replace_uav(state, cfg):
    """Swap in a freshly charged UAV."""
    return replace(state, E=cfg.E_primary, replacements=state.replacements + 1, deficit_flag=False)
