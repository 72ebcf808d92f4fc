"""Per-step power draw of a UAV base station.

Hover physics of a multirotor, RIS phase-shifter load and the load-aware
massive-MIMO transceiver model (circuit + amplifier power).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import ConfigError, DomainError


class UavAirframe(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    m_UAV: float = Field(2.0, ge=0)
    m_AUX: float = Field(0.0, ge=0)
    P_AUX: float = Field(0.0, ge=0)
    r_p: float = Field(0.5, gt=0)
    l_p: int = Field(12, ge=1)
    h_UAV: float = 50.0
    sigma_DC: float = Field(0.075, ge=0, lt=1)


class MimoConfig(BaseModel):
    """Transceiver hardware and frame parameters.

    ``eta_BS`` is in Gflops/W, ``B_w``/``B_c`` in Hz, ``t_c`` in s and the
    traffic-proportional powers in W per Gbit/s.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    N_MIMO: int = Field(1, ge=0)
    m_MIMO: float = Field(1.0, ge=0)
    M_max: int = Field(64, ge=1)
    P_FIX: float = Field(10.0, ge=0)
    P_CC: float = Field(0.4, ge=0)
    P_LO: float = Field(0.2, ge=0)
    P_COD: float = Field(0.1, ge=0)
    P_DEC: float = Field(0.8, ge=0)
    P_BT: float = Field(0.25, ge=0)
    mu_PA: float = Field(0.35, gt=0, le=1)
    eta_BS: float = Field(75.0, gt=0)
    B_w: float = Field(120e6, gt=0)
    B_c: float = Field(1e6, gt=0)
    t_c: float = Field(0.05, gt=0)
    RF: float = Field(1.0, ge=0)
    D_DL: float = Field(0.75, ge=0, le=1)
    D_UL: float = Field(0.25, ge=0, le=1)
    include_lo: bool = False

    @model_validator(mode="after")
    def _frame(self):
        if self.D_DL + self.D_UL > 1 + 1e-12:
            raise ValueError("D_DL + D_UL must not exceed 1")
        if self.B_c * self.t_c < 1:
            raise ValueError("coherence block B_c*t_c must hold at least one sample")
        return self

    @property
    def tau_c(self):
        return self.B_c * self.t_c


class RisConfig(BaseModel):
    """RIS hardware. ``P_PSH`` is read in the unit named by ``P_PSH_units``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    N_RIS: int = Field(1, ge=0)
    m_RIS: float = Field(1.0, ge=0)
    N_RE: int = Field(16, ge=0)
    P_PSH: float = Field(7.8, ge=0)
    P_PSH_units: Literal["w", "mw"] = "w"
    b_PSH: int = Field(6, ge=1)

    @property
    def P_PSH_watts(self):
        return self.P_PSH / 1000.0 if self.P_PSH_units == "mw" else self.P_PSH


class CellLoad(BaseModel):
    """Traffic load of one cell: users, active antennas, radiated W, Gbit/s."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    K_UE: int = Field(0, ge=0)
    M_BS: int = Field(0, ge=0)
    P_TX: float = Field(0.0, ge=0)
    TR_DL: float = Field(0.0, ge=0)
    TR_UL: float = Field(0.0, ge=0)


@dataclass(frozen=True)
class PowerBreakdown:
    p_hover: float
    p_ris: float
    p_mimo_cp: float
    p_mimo_pa: float
    p_aux: float
    p_total_dc: float
    p_pv: float = 0.0

    @property
    def p_mimo(self):
        return self.p_mimo_cp + self.p_mimo_pa


def package_mass(mimo, ris, pv, airframe):
    """Lifted payload mass: transceivers, RIS arrays, PV panels and auxiliaries."""
    return mimo.N_MIMO * mimo.m_MIMO + ris.N_RIS * ris.m_RIS + pv.N_PV * pv.m_PV + airframe.m_AUX


def uav_hover_power(airframe, m_pkg, atmo):
    """Induced hover power (W) of a multirotor at air density ``atmo.rho``."""
    if atmo.rho <= 0:
        raise DomainError(f"air density must be positive, got {atmo.rho}")
    weight = (airframe.m_UAV + m_pkg) * atmo.g
    return math.sqrt(weight**3 / (2.0 * math.pi * airframe.r_p**2 * airframe.l_p * atmo.rho))


def ris_power(ris):
    return ris.N_RIS * ris.N_RE * ris.P_PSH_watts


def pilot_samples(load, mimo):
    return mimo.RF * load.K_UE


def _validate_load(load, mimo):
    if load.M_BS > mimo.M_max:
        raise ConfigError(f"M_BS={load.M_BS} exceeds M_max={mimo.M_max}")


def mimo_circuit_power(load, mimo):
    """Circuit power of one transceiver (fixed, chains, estimation, coding, backhaul, processing)."""
    _validate_load(load, mimo)
    tau_c = mimo.tau_c
    tau_p = pilot_samples(load, mimo)
    if tau_p > tau_c:
        raise DomainError(f"pilot samples {tau_p} exceed coherence block {tau_c}")
    tau_d = mimo.D_DL * (tau_c - tau_p)
    tau_u = mimo.D_UL * (tau_c - tau_p)
    M, K = load.M_BS, load.K_UE
    scale = 3.0 * mimo.B_w / (tau_c * mimo.eta_BS * 1e9)

    p_tc = M * mimo.P_CC
    if mimo.include_lo:
        p_tc += mimo.P_LO
    p_ce = scale * K * (M * tau_p + M**2)
    p_cd = mimo.P_COD * load.TR_DL + mimo.P_DEC * load.TR_UL
    p_bh = mimo.P_BT * (load.TR_DL + load.TR_UL)
    p_sp = scale * (
        M * K * (tau_u + tau_d)
        + (3 * M**2 + M) * K / 2.0
        + M**3 / 3.0
        + 2 * M
        + M * tau_p * (tau_p - K)
        + M * K
    )
    return mimo.P_FIX + p_tc + p_ce + p_cd + p_bh + p_sp


def amplifier_power(load, mimo):
    return load.P_TX / mimo.mu_PA


def mimo_power(load, mimo):
    """Total transceiver power, summed over the ``N_MIMO`` transceivers."""
    return mimo.N_MIMO * (mimo_circuit_power(load, mimo) + amplifier_power(load, mimo))


def total_consumption(airframe, mimo, ris, load, atmo, m_pkg):
    """DC-side consumption breakdown of one UAV base station for one step.

    ``p_pv`` is left at zero; the caller fills it in.
    """
    p_hover = uav_hover_power(airframe, m_pkg, atmo)
    p_cp = mimo.N_MIMO * mimo_circuit_power(load, mimo)
    p_pa = mimo.N_MIMO * amplifier_power(load, mimo)
    p_ris = ris_power(ris)
    raw = p_hover + p_cp + p_pa + p_ris + airframe.P_AUX
    return PowerBreakdown(
        p_hover=p_hover,
        p_ris=p_ris,
        p_mimo_cp=p_cp,
        p_mimo_pa=p_pa,
        p_aux=airframe.P_AUX,
        p_total_dc=raw / (1.0 - airframe.sigma_DC),
    )


def dbm_to_watts(dbm):
    return 10.0 ** (dbm / 10.0) / 1000.0
