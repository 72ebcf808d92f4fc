"""PV array output with irradiance scaling and NOCT cell-temperature derating."""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import DomainError


class PvConfig(BaseModel):
    """PV array configuration. ``alpha_P`` is per degree C (-0.005 = -0.5 %/degC)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    N_PV_s: int = Field(1, ge=0)
    N_PV_p: int = Field(5, ge=0)
    m_PV: float = Field(0.0, ge=0)
    P_R_PV: float = Field(20.0, ge=0)
    f_PV: float = Field(0.723, gt=0, le=1)
    a_PV: float = Field(0.576, gt=0)
    b_PV: float = Field(0.357, gt=0)
    alpha_P: float = -0.005
    G_STC: float = Field(1000.0, gt=0)
    T_c_STC: float = 25.0
    G_NOCT: float = Field(800.0, gt=0)
    T_c_NOCT: float = 47.0
    T_a_NOCT: float = 20.0
    tau: float = Field(0.3 * math.sqrt(10.0), gt=0, le=1)
    alpha: float = Field(0.3 * math.sqrt(10.0), gt=0, le=1)
    h_PV: float = 50.0

    @model_validator(mode="after")
    def _tau_alpha(self):
        if not 0 < self.tau * self.alpha <= 1:
            raise ValueError("tau*alpha must lie in (0, 1]")
        return self

    @property
    def N_PV(self):
        return self.N_PV_s * self.N_PV_p


def mpp_efficiency(pv):
    """Maximum-power-point efficiency of one module at STC."""
    return pv.P_R_PV / (pv.a_PV * pv.b_PV * pv.G_STC)


def cell_temperature(G_T, T_a, pv):
    """Cell temperature (degC) for irradiance ``G_T`` and ambient ``T_a``."""
    if G_T < 0:
        raise DomainError(f"irradiance must be non-negative, got {G_T}")
    mu = mpp_efficiency(pv)
    ta = pv.tau * pv.alpha
    x = (pv.T_c_NOCT - pv.T_a_NOCT) * (G_T / pv.G_NOCT)
    den = 1.0 + x * (pv.alpha_P * mu / ta)
    if den <= 0:
        raise DomainError("non-physical PV configuration: cell-temperature denominator <= 0")
    return (T_a + x * (1.0 - mu * (1.0 - pv.alpha_P * pv.T_c_STC) / ta)) / den


def pv_power(G_T, T_a, pv):
    """Array output power (W), clamped at zero for extreme cell temperatures."""
    if G_T < 0:
        raise DomainError(f"irradiance must be non-negative, got {G_T}")
    if G_T == 0:
        return 0.0
    T_c = cell_temperature(G_T, T_a, pv)
    p = pv.N_PV * pv.P_R_PV * pv.f_PV * (G_T / pv.G_STC) * (1.0 + pv.alpha_P * (T_c - pv.T_c_STC))
    return max(0.0, p)
