"""Simplified green-RAN planning: link budgets and greedy BS-UE association.

Every user demands a fixed downlink rate. A link is feasible at a candidate
transmit power when its path loss does not exceed the maximum allowable
path loss (MAPL) for that demand and power. The greedy planner attaches
users one at a time to the base station whose transmit power has to grow
the least; :func:`exhaustive_plan` is the brute-force reference used to
check it on small instances.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .errors import ConfigError, DomainError
from .power_models import dbm_to_watts

THERMAL_NOISE_DBM_HZ = -174.0
SNR_FLOOR_DB = -10.0


class LinkBudgetParams(BaseModel):
    """Radio link budget; all gains, losses and margins in dB, ``f`` in MHz."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    f: float = Field(3500.0, gt=0)
    G_a_BS: float = 24.0
    G_a_UE: float = 0.0
    L_f: float = Field(3.0, ge=0)
    NF: float = Field(7.0, ge=0)
    IM: float = Field(2.0, ge=0)
    DM: float = Field(3.0, ge=0)
    FM: float = Field(10.0, ge=0)
    SM: float = Field(10.0, ge=0)
    IL: float = Field(3.0, ge=0)
    G_SHO: float = 0.0
    P_TX_levels: tuple[float, ...] = tuple(float(x) for x in range(22, 43, 2))
    N_SC_u: int = Field(320, gt=0)
    N_SC_t: int = Field(512, gt=0)
    SF: float = Field(1.536, gt=0)
    S: float = Field(0.25, ge=0, le=1)
    max_spectral_efficiency: float = Field(8.0, gt=0)
    path_loss_model: Literal["UMa-LOS", "UMa-NLOS"] = "UMa-LOS"

    @field_validator("P_TX_levels")
    @classmethod
    def _ascending(cls, v):
        if not v:
            raise ValueError("P_TX_levels must not be empty")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("P_TX_levels must be strictly ascending")
        return v

    @property
    def margins(self):
        return self.IM + self.DM + self.FM + self.SM + self.IL


class Position(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    x: float
    y: float
    z: float = 0.0


@dataclass(frozen=True)
class UserEquipment:
    x: float
    y: float
    z: float = 1.5
    demand_dl: float = 100.0  # Mbit/s


@dataclass(frozen=True)
class Scenario:
    """Base-station positions (with altitude in ``z``), users and area bounds."""

    base_stations: tuple
    users: tuple
    bounds: tuple = (0.0, 0.0, 1000.0, 1000.0)
    k_max: int = 25

    def __post_init__(self):
        x0, y0, x1, y1 = self.bounds
        for kind, items in (("base station", self.base_stations), ("user", self.users)):
            for i, p in enumerate(items):
                if not (x0 <= p.x <= x1 and y0 <= p.y <= y1):
                    raise ConfigError(f"{kind} {i} at ({p.x}, {p.y}) lies outside bounds {self.bounds}")


@dataclass
class CellAssignment:
    """Planner output. ``serving[u]`` is the BS index of user ``u`` or -1."""

    serving: np.ndarray
    active: np.ndarray
    level: np.ndarray  # index into P_TX_levels, -1 when inactive
    p_tx_w: np.ndarray
    served: list = field(default_factory=list)
    K_UE: np.ndarray = None
    M_BS: np.ndarray = None
    TR_DL: np.ndarray = None  # Gbit/s
    TR_UL: np.ndarray = None

    @property
    def n_served(self):
        return int(np.sum(self.serving >= 0))

    @property
    def total_power(self):
        return float(np.sum(self.p_tx_w))

    def load(self, b):
        from .power_models import CellLoad

        return CellLoad(
            K_UE=int(self.K_UE[b]),
            M_BS=int(self.M_BS[b]),
            P_TX=float(self.p_tx_w[b]),
            TR_DL=float(self.TR_DL[b]),
            TR_UL=float(self.TR_UL[b]),
        )


def path_loss(d3d, f_ghz, model="UMa-LOS", h_ue=1.5):
    """TR 38.901 UMa path loss in dB (LOS form below the breakpoint)."""
    if d3d < 1:
        raise DomainError(f"3D distance must be at least 1 m, got {d3d}")
    los = 28.0 + 22.0 * math.log10(d3d) + 20.0 * math.log10(f_ghz)
    if model == "UMa-LOS":
        return los
    if model == "UMa-NLOS":
        nlos = 13.54 + 39.08 * math.log10(d3d) + 20.0 * math.log10(f_ghz) - 0.6 * (h_ue - 1.5)
        return max(los, nlos)
    raise ValueError(f"unknown path-loss model {model!r}")


def effective_bandwidth(lb, mimo):
    """Downlink bandwidth in Hz after subcarrier usage, sampling and TDD share."""
    return mimo.B_w * (lb.N_SC_u / lb.N_SC_t) / lb.SF * mimo.D_DL


def max_allowable_path_loss(demand, p_tx, lb, mimo):
    """MAPL in dB for ``demand`` Mbit/s at ``p_tx`` dBm, or ``None`` if unreachable.

    A demand above ``max_spectral_efficiency`` bit/s/Hz over the effective
    bandwidth is unreachable at any power.
    """
    if demand <= 0:
        raise DomainError(f"demand must be positive, got {demand}")
    b_eff = effective_bandwidth(lb, mimo)
    efficiency = demand * 1e6 / b_eff
    if efficiency > lb.max_spectral_efficiency:
        return None
    snr_db = max(SNR_FLOOR_DB, 10.0 * math.log10(2.0**efficiency - 1.0))
    noise_dbm = THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(b_eff) + lb.NF
    return p_tx + lb.G_a_BS + lb.G_a_UE - lb.L_f - lb.margins + lb.G_SHO - (noise_dbm + snr_db)


def distance_3d(bs, ue):
    return math.sqrt((bs.x - ue.x) ** 2 + (bs.y - ue.y) ** 2 + (bs.z - ue.z) ** 2)


def link_table(scn, lb, mimo):
    """Path losses ``(n_ue, n_bs)`` and the minimal feasible level index (-1 if none)."""
    n_ue, n_bs = len(scn.users), len(scn.base_stations)
    pl = np.empty((n_ue, n_bs))
    need = np.full((n_ue, n_bs), -1, dtype=np.int64)
    f_ghz = lb.f / 1000.0
    for u, ue in enumerate(scn.users):
        mapl = [max_allowable_path_loss(ue.demand_dl, p, lb, mimo) for p in lb.P_TX_levels]
        for b, bs in enumerate(scn.base_stations):
            pl[u, b] = path_loss(max(1.0, distance_3d(bs, ue)), f_ghz, lb.path_loss_model, ue.z)
            for k, m in enumerate(mapl):
                if m is not None and m >= pl[u, b]:
                    need[u, b] = k
                    break
    return pl, need


def _finish(scn, lb, mimo, serving, level):
    n_bs = len(scn.base_stations)
    levels_w = np.array([dbm_to_watts(p) for p in lb.P_TX_levels])
    active = level >= 0
    p_tx = np.where(active, levels_w[np.maximum(level, 0)], 0.0)
    served = [np.flatnonzero(serving == b).tolist() for b in range(n_bs)]
    K = np.array([len(s) for s in served], dtype=np.int64)
    demand = np.array([u.demand_dl for u in scn.users], dtype=np.float64)
    tr_dl = np.array([demand[s].sum() / 1000.0 if s else 0.0 for s in served])
    tr_ul = tr_dl * (mimo.D_UL / mimo.D_DL)
    M = np.where(active, mimo.M_max, 0).astype(np.int64)
    return CellAssignment(serving=serving, active=active, level=level, p_tx_w=p_tx, served=served,
                          K_UE=K, M_BS=M, TR_DL=tr_dl, TR_UL=tr_ul)


def plan_cells(scn, lb, mimo, seed=None):
    """Greedy association; deterministic for a given scenario.

    Users are visited by ascending best-link path loss. Each joins the
    base station with spare capacity whose power has to rise the least
    (in watts) to reach it; ties go to the lower path loss, then the lower
    BS index. ``seed`` is accepted for interface symmetry and unused, the
    procedure has no random choices.
    """
    n_ue, n_bs = len(scn.users), len(scn.base_stations)
    serving = np.full(n_ue, -1, dtype=np.int64)
    level = np.full(n_bs, -1, dtype=np.int64)
    if n_ue == 0 or n_bs == 0:
        return _finish(scn, lb, mimo, serving, level)
    pl, need = link_table(scn, lb, mimo)
    levels_w = np.array([dbm_to_watts(p) for p in lb.P_TX_levels])
    load = np.zeros(n_bs, dtype=np.int64)

    order = sorted(range(n_ue), key=lambda u: (pl[u].min(), u))
    for u in order:
        best = None
        for b in range(n_bs):
            k = need[u, b]
            if k < 0 or load[b] >= scn.k_max:
                continue
            current = levels_w[level[b]] if level[b] >= 0 else 0.0
            inc = max(0.0, levels_w[k] - current)
            key = (inc, pl[u, b], b)
            if best is None or key < best:
                best = key
        if best is None:
            continue
        b = best[2]
        serving[u] = b
        load[b] += 1
        level[b] = max(level[b], need[u, b])
    return _finish(scn, lb, mimo, serving, level)


MAX_EXHAUSTIVE = (3, 6, 4)


def exhaustive_plan(scn, lb, mimo):
    """Brute-force reference: most users served, then least total transmit power.

    Enumerates every user-to-BS (or unserved) mapping; each active BS runs at
    the lowest level that reaches all of its users. Only for small instances.
    """
    n_ue, n_bs = len(scn.users), len(scn.base_stations)
    max_bs, max_ue, max_lv = MAX_EXHAUSTIVE
    if n_bs > max_bs or n_ue > max_ue or len(lb.P_TX_levels) > max_lv:
        raise ConfigError(
            f"exhaustive_plan limited to {max_bs} BS, {max_ue} UE, {max_lv} power levels"
        )
    pl, need = link_table(scn, lb, mimo)
    levels_w = np.array([dbm_to_watts(p) for p in lb.P_TX_levels])
    best_key, best = None, None
    for combo in itertools.product(range(-1, n_bs), repeat=n_ue):
        level = np.full(n_bs, -1, dtype=np.int64)
        load = np.zeros(n_bs, dtype=np.int64)
        ok = True
        for u, b in enumerate(combo):
            if b < 0:
                continue
            if need[u, b] < 0:
                ok = False
                break
            load[b] += 1
            level[b] = max(level[b], need[u, b])
        if not ok or np.any(load > scn.k_max):
            continue
        served = sum(1 for b in combo if b >= 0)
        power = float(sum(levels_w[k] for k in level if k >= 0))
        key = (-served, power)
        if best_key is None or key < best_key:
            best_key, best = key, (np.array(combo, dtype=np.int64), level)
    return _finish(scn, lb, mimo, *best)


def random_users(rng, n, bounds, demand_dl=100.0, height=1.5):
    """Uniformly placed users inside ``bounds`` drawn from ``rng``."""
    x0, y0, x1, y1 = bounds
    xy = rng.uniform((x0, y0), (x1, y1), size=(n, 2))
    return tuple(UserEquipment(float(x), float(y), height, demand_dl) for x, y in xy)
