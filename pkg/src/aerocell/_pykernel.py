"""Pure-Python step loop built from the model functions."""

from dataclasses import dataclass

from .atmosphere import atmosphere_state, temperature_at
from .battery import BatteryState, replace_uav, step_battery
from .power_models import uav_hover_power
from .pv_harvest import pv_power


@dataclass(frozen=True)
class _Sample:
    T_ws: float
    p_0: float


def run(T_ws, p_0, G_T, prm, p_hover, p_pv, p_total, e_batt, e_in, e_out, unmet, replaced):
    cfg = prm.cfg
    site, c, bcfg = cfg.site, cfg.atmosphere, cfg.battery
    state = BatteryState(E=prm.E_primary, E_max=prm.E_max, floor=prm.floor)
    e_initial = state.E
    swapped_in = retired = 0.0
    carry = 0.0
    denom = 1.0 - prm.sigma_dc
    for i in range(len(T_ws)):
        atmo = atmosphere_state(_Sample(float(T_ws[i]), float(p_0[i])), prm.h_uav, site, c)
        ph = uav_hover_power(cfg.airframe, prm.m_pkg, atmo)
        g = float(G_T[i])
        ppv = 0.0
        if prm.pv_enabled and g > 0.0:
            ppv = pv_power(g, temperature_at(float(T_ws[i]), prm.h_pv, site, c), cfg.pv)
        ptot = (ph + prm.p_other) / denom
        dE = (ppv - ptot) * prm.dt_h

        gained = lost = 0.0
        deficit = 0.0
        if carry > 0.0:
            retired += state.E
            state = replace_uav(state, bcfg)
            swapped_in += state.E
            replaced[i] = 1
            before = state.E
            state, deficit = step_battery(state, -carry, bcfg)
            lost += before - state.E
        before = state.E
        state, d = step_battery(state, dE, bcfg)
        delta = state.E - before
        if delta >= 0.0:
            gained += delta
        else:
            lost -= delta
        carry = deficit + d

        p_hover[i] = ph
        p_pv[i] = ppv
        p_total[i] = ptot
        e_batt[i] = state.E
        e_in[i] = gained
        e_out[i] = lost
        unmet[i] = carry
    return e_initial, swapped_in, retired
