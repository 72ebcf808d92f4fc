"""Per-UAV time-stepping kernel with a compiled fast path.

The compiled extension ``aerocell._ckernel`` is used when importable;
otherwise, or when ``AEROCELL_PURE_PYTHON=1`` is set, the pure-Python
implementation in :mod:`aerocell._pykernel` runs instead. Both fill the
same output arrays and agree to rounding.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import _pykernel

try:
    if os.environ.get("AEROCELL_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend forced")
    from . import _ckernel
except ImportError:
    _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"


@dataclass(frozen=True)
class KernelParams:
    """Everything the step loop needs for one UAV, flattened to scalars.

    ``cfg`` keeps the source configuration for the pure-Python path.
    ``p_other`` is the constant raw (pre-DC-loss) draw of transceivers,
    RIS and auxiliaries.
    """

    cfg: object
    m_pkg: float
    p_other: float
    pv_enabled: bool
    dt_h: float
    # atmosphere
    h_uav: float
    h_pv: float
    h_T: float
    h_WS: float
    h_0: float
    lapse: float
    R_d: float
    R_v: float
    R_u: float
    m_air: float
    g_0: float
    r_e: float
    # airframe
    m_total: float
    r_p: float
    l_p: float
    sigma_dc: float
    # pv
    pv_scale: float
    G_STC: float
    alpha_P: float
    T_c_STC: float
    G_NOCT: float
    noct_dT: float
    mu_mp: float
    tau_alpha: float
    # battery
    E_max: float
    floor: float
    E_primary: float
    mu_batt: float
    charge_printed: bool

    @classmethod
    def build(cls, cfg, m_pkg, p_other, pv_enabled, dt_h):
        from .pv_harvest import mpp_efficiency

        a, c, s, pv, b = cfg.airframe, cfg.atmosphere, cfg.site, cfg.pv, cfg.battery
        return cls(
            cfg=cfg, m_pkg=m_pkg, p_other=p_other, pv_enabled=bool(pv_enabled and pv.N_PV > 0),
            dt_h=dt_h,
            h_uav=a.h_UAV, h_pv=pv.h_PV, h_T=s.h_T, h_WS=s.h_WS, h_0=c.h_0, lapse=c.lapse_rate,
            R_d=c.R_d, R_v=c.R_v, R_u=c.R_u, m_air=c.m_air, g_0=c.g_0, r_e=c.r_e,
            m_total=a.m_UAV + m_pkg, r_p=a.r_p, l_p=float(a.l_p), sigma_dc=a.sigma_DC,
            pv_scale=pv.N_PV * pv.P_R_PV * pv.f_PV, G_STC=pv.G_STC, alpha_P=pv.alpha_P,
            T_c_STC=pv.T_c_STC, G_NOCT=pv.G_NOCT, noct_dT=pv.T_c_NOCT - pv.T_a_NOCT,
            mu_mp=mpp_efficiency(pv), tau_alpha=pv.tau * pv.alpha,
            E_max=b.E_max, floor=b.floor, E_primary=b.E_primary, mu_batt=b.mu_BATT,
            charge_printed=b.charge_rule == "printed",
        )


@dataclass
class UavTrace:
    """Step-by-step record of one UAV over the horizon.

    ``replaced[i]`` marks a swap at the start of step ``i``; ``unmet[i]``
    is the load-side energy left unserved at the end of step ``i``.
    """

    p_hover: np.ndarray
    p_pv: np.ndarray
    p_total: np.ndarray
    e_batt: np.ndarray
    e_in: np.ndarray
    e_out: np.ndarray
    unmet: np.ndarray
    replaced: np.ndarray
    e_initial: float
    e_swapped_in: float
    e_retired: float

    @property
    def replacements(self):
        return int(self.replaced.sum())

    @property
    def e_final(self):
        return float(self.e_batt[-1]) if len(self.e_batt) else self.e_initial

    def conservation_residual(self):
        """Initial + swapped-in - retired + charged - discharged - final (Wh)."""
        return (self.e_initial + self.e_swapped_in - self.e_retired
                + math.fsum(self.e_in) - math.fsum(self.e_out) - self.e_final)


def empty_trace(n):
    f = lambda: np.zeros(n, dtype=np.float64)  # noqa: E731
    return UavTrace(f(), f(), f(), f(), f(), f(), f(), np.zeros(n, dtype=np.int8), 0.0, 0.0, 0.0)


def simulate_uav(T_ws, p_0, G_T, prm, backend=None):
    """Run the step loop for one UAV over the given weather columns."""
    T_ws = np.ascontiguousarray(T_ws, dtype=np.float64)
    p_0 = np.ascontiguousarray(p_0, dtype=np.float64)
    G_T = np.ascontiguousarray(G_T, dtype=np.float64)
    n = len(T_ws)
    trace = empty_trace(n)
    impl = _select(backend)
    scalars = impl.run(T_ws, p_0, G_T, prm, trace.p_hover, trace.p_pv, trace.p_total,
                       trace.e_batt, trace.e_in, trace.e_out, trace.unmet, trace.replaced)
    trace.e_initial, trace.e_swapped_in, trace.e_retired = scalars
    return trace


def _select(backend):
    if backend in (None, BACKEND):
        return _ckernel if _ckernel is not None else _pykernel
    if backend == "python":
        return _pykernel
    if backend == "cython":
        if _ckernel is None:
            raise ImportError("compiled kernel not available")
        return _ckernel
    raise ValueError(f"unknown backend {backend!r}")
