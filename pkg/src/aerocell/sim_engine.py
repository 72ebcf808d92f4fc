"""Monte Carlo driver: seasonal days x runs x UAVs, plus metric reduction.

Random numbers come from numpy's PCG64. The root ``SeedSequence(seed)``
is spawned into one child per run; each run's child is spawned into one
grandchild per user, and user ``u`` draws ``(x, y)`` uniformly over the
scenario bounds from its own generator. A user's position therefore
depends only on ``(seed, run, u)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernel
from .cell_plan import Scenario, UserEquipment, plan_cells
from .errors import ConfigError
from .power_models import mimo_power, package_mass, ris_power
from .weather_io import (
    WeatherSeries,
    load_weather_csv,
    noon_elevation,
    resample_to_step,
    synthetic_clear_sky,
)


@dataclass
class Horizon:
    """Concatenated seasonal days at the simulation step."""

    names: list
    days: list
    day_index: np.ndarray
    step_s: float

    @property
    def n_steps(self):
        return len(self.day_index)

    @property
    def t(self):
        return np.concatenate([d.t for d in self.days])

    def column(self, name):
        return np.concatenate([getattr(d, name) for d in self.days])


@dataclass
class ArmSummary:
    """Per-run reduction of one arm (with or without PV); arrays are per BS x day."""

    run: int
    seed: int
    res: bool
    swaps_day: np.ndarray
    pv_energy_day: np.ndarray
    pv_peak_day: np.ndarray
    consumption_day: np.ndarray
    demand_day: np.ndarray
    harvest_day: np.ndarray
    replacements: np.ndarray
    grid_energy: np.ndarray
    unserved: np.ndarray
    residual: np.ndarray
    served_users: int = 0
    active_cells: int = 0


@dataclass
class StepLog:
    """Full per-step record of one run/arm for all base stations."""

    t: np.ndarray
    day_index: np.ndarray
    p_mimo: np.ndarray
    p_ris: np.ndarray
    traces: list

    @property
    def n_bs(self):
        return len(self.traces)


@dataclass
class SeasonMetrics:
    pv_energy_total_per_uav: float
    pv_energy_peak_per_uav: float
    anur: float
    anur_no_res: float
    arec_grid: float
    arec_harvest: float
    grid_energy: float
    grid_energy_no_res: float
    consumption_energy: float


@dataclass
class MetricsReport:
    seasons: dict
    aggregate: SeasonMetrics
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        from dataclasses import asdict

        return {
            "meta": dict(self.meta),
            "seasons": {k: asdict(v) for k, v in self.seasons.items()},
            "aggregate": asdict(self.aggregate),
        }


@dataclass
class SimResult:
    report: MetricsReport
    res_logs: list
    no_res_logs: list
    step_log: StepLog | None


def build_horizon(cfg, weather=None):
    """Weather for every configured day, resampled to the simulation step.

    ``weather`` optionally supplies one :class:`WeatherSeries` per day and
    overrides the configured sources.
    """
    sim = cfg.simulation
    if not sim.days:
        raise ConfigError("simulation.days is empty")
    if weather is not None and len(weather) != len(sim.days):
        raise ConfigError(f"{len(weather)} weather series for {len(sim.days)} configured days")
    days = []
    for k, day in enumerate(sim.days):
        if weather is not None:
            series = weather[k]
        elif day.weather_csv:
            series = load_weather_csv(day.weather_csv, max_gap_s=sim.max_gap_s)
        else:
            peak = day.clear_sky_irradiance * max(
                0.0, math.sin(math.radians(noon_elevation(day.day_of_year, sim.latitude))))
            series = synthetic_clear_sky(day.day_of_year, sim.latitude, peak, day.T_day,
                                         day.T_night, day.p_0, sim.step_s)
        if len(series) == 0:
            raise ConfigError(f"weather for day '{day.name}' is empty")
        if series.step != sim.step_s or len(series) < 2:
            series = resample_to_step(series, sim.step_s)
        days.append(series)
    day_index = np.concatenate([np.full(len(d), k, dtype=np.int64) for k, d in enumerate(days)])
    return Horizon([d.name for d in sim.days], days, day_index, sim.step_s)


def draw_users(cfg, run_seq):
    sc = cfg.scenario
    x0, y0, x1, y1 = sc.bounds
    users = []
    for child in run_seq.spawn(sc.n_users):
        rng = np.random.Generator(np.random.PCG64(child))
        x, y = rng.uniform((x0, y0), (x1, y1))
        users.append(UserEquipment(float(x), float(y), sc.ue_height, sc.demand_dl))
    return tuple(users)


def build_scenario(cfg, users):
    sc = cfg.scenario
    if not sc.base_stations:
        raise ConfigError("scenario.base_stations is empty")
    h = cfg.airframe.h_UAV
    bss = tuple(type(p)(x=p.x, y=p.y, z=h) for p in sc.base_stations)
    return Scenario(base_stations=bss, users=users, bounds=tuple(sc.bounds), k_max=sc.k_max)


def run_seeds(cfg):
    return np.random.SeedSequence(cfg.simulation.seed).spawn(cfg.simulation.runs)


def _summarize(traces, horizon, cfg, run, res, plan):
    n_days = len(horizon.days)
    dt = horizon.step_s / 3600.0
    idx = horizon.day_index
    # a swap at step i closes the deficit of step i-1 and is booked to that day
    attrib = np.concatenate([[0], idx[:-1]])
    n_bs = len(traces)
    out = {k: np.zeros((n_bs, n_days)) for k in
           ("pv_energy_day", "pv_peak_day", "consumption_day", "demand_day", "harvest_day")}
    swaps = np.zeros((n_bs, n_days), dtype=np.int64)
    for b, tr in enumerate(traces):
        swaps[b] = np.bincount(attrib, weights=tr.replaced, minlength=n_days).astype(np.int64)
        used = np.minimum(tr.p_pv, tr.p_total) * dt + tr.e_in
        for d in range(n_days):
            m = idx == d
            out["pv_energy_day"][b, d] = math.fsum(tr.p_pv[m] * dt)
            out["pv_peak_day"][b, d] = float(tr.p_pv[m].max()) if m.any() else 0.0
            out["consumption_day"][b, d] = math.fsum(tr.p_total[m] * dt)
            out["demand_day"][b, d] = math.fsum((tr.p_total[m] - tr.p_pv[m]) * dt)
            out["harvest_day"][b, d] = math.fsum(used[m])
    reps = np.array([tr.replacements for tr in traces], dtype=np.int64)
    e_p = cfg.battery.E_primary
    return ArmSummary(
        run=run, seed=cfg.simulation.seed, res=res, swaps_day=swaps, replacements=reps,
        grid_energy=np.array([tr.e_initial + r * e_p for tr, r in zip(traces, reps)]),
        unserved=np.array([float(tr.unmet[-1]) if len(tr.unmet) else 0.0 for tr in traces]),
        residual=np.array([tr.conservation_residual() for tr in traces]),
        served_users=plan.n_served, active_cells=int(plan.active.sum()), **out,
    )


def _run_one(cfg, horizon, run, run_seq, backend, keep_log):
    users = draw_users(cfg, run_seq)
    scn = build_scenario(cfg, users)
    plan = plan_cells(scn, cfg.link_budget, cfg.mimo)
    m_pkg = package_mass(cfg.mimo, cfg.ris, cfg.pv, cfg.airframe)
    dt = horizon.step_s / 3600.0
    T, p0, G = horizon.column("T_ws"), horizon.column("p_0"), horizon.column("G_T")
    arms = [False, True] if cfg.simulation.res_enabled else [False]
    p_mimo = np.array([mimo_power(plan.load(b), cfg.mimo) for b in range(len(scn.base_stations))])
    p_ris = np.full(len(p_mimo), ris_power(cfg.ris))
    out, logs = {}, {}
    for res in arms:
        traces = []
        for b in range(len(p_mimo)):
            p_other = p_mimo[b] + p_ris[b] + cfg.airframe.P_AUX
            prm = kernel.KernelParams.build(cfg, m_pkg, p_other, res, dt)
            traces.append(kernel.simulate_uav(T, p0, G, prm, backend=backend))
        out[res] = _summarize(traces, horizon, cfg, run, res, plan)
        if keep_log:
            logs[res] = StepLog(horizon.t, horizon.day_index, p_mimo, p_ris, traces)
    return out, logs


def run_simulation(cfg, weather=None, backend=None, log_run=0):
    """Simulate every run; returns metrics, per-run summaries and one step log.

    The step log belongs to run ``log_run`` of the PV arm (the no-PV arm
    when PV is disabled); pass ``log_run=None`` to skip it.
    """
    horizon = build_horizon(cfg, weather)
    seqs = run_seeds(cfg)
    sim = cfg.simulation

    def job(r):
        return _run_one(cfg, horizon, r, seqs[r], backend, keep_log=(r == log_run))

    if sim.threads > 1 and sim.runs > 1:
        with ThreadPoolExecutor(max_workers=sim.threads) as pool:
            results = list(pool.map(job, range(sim.runs)))
    else:
        results = [job(r) for r in range(sim.runs)]

    no_res = [res[False] for res, _ in results]
    with_res = [res[True] for res, _ in results] if sim.res_enabled else None
    step_log = None
    if log_run is not None and 0 <= log_run < sim.runs:
        logs = results[log_run][1]
        step_log = logs[True] if sim.res_enabled else logs[False]

    report = build_report(cfg, horizon, with_res, no_res)
    return SimResult(report, with_res, no_res, step_log)


def compute_anur(logs):
    """Mean swaps per UAV: per-day values (booked to the deficit day) and the horizon total."""
    per_day = np.mean([s.swaps_day.mean(axis=0) for s in logs], axis=0)
    total = float(np.mean([s.replacements.mean() for s in logs]))
    return [float(x) for x in per_day], total


def _pct_reduction(base, new):
    if base <= 0:
        return 0.0
    return min(100.0, max(0.0, 100.0 * (base - new) / base))


def compute_arec(res_logs, no_res_logs):
    """Reduction in grid energy and PV share of consumption, per day and overall.

    Overall ``grid`` compares energy delivered by charging stations
    (initial charge plus swaps). Per day, swaps are too coarse, so ``grid``
    compares the net energy the load drew from the battery. ``harvest`` is
    the PV energy that reached the load or the battery over consumption.
    """
    if len(res_logs) != len(no_res_logs):
        raise ConfigError("AREC needs paired runs")
    for a, b in zip(res_logs, no_res_logs):
        if (a.run, a.seed) != (b.run, b.seed) or a.swaps_day.shape != b.swaps_day.shape:
            raise ConfigError(f"unpaired runs: {(a.run, a.seed)} vs {(b.run, b.seed)}")
    n_days = res_logs[0].swaps_day.shape[1]
    g_res = math.fsum(float(s.grid_energy.sum()) for s in res_logs)
    g_no = math.fsum(float(s.grid_energy.sum()) for s in no_res_logs)
    grid_day, harvest_day = [], []
    for d in range(n_days):
        dem_res = math.fsum(float(s.demand_day[:, d].sum()) for s in res_logs)
        dem_no = math.fsum(float(s.demand_day[:, d].sum()) for s in no_res_logs)
        grid_day.append(_pct_reduction(dem_no, dem_res))
        used = math.fsum(float(s.harvest_day[:, d].sum()) for s in res_logs)
        cons = math.fsum(float(s.consumption_day[:, d].sum()) for s in res_logs)
        harvest_day.append(100.0 * used / cons if cons > 0 else 0.0)
    used = math.fsum(float(s.harvest_day.sum()) for s in res_logs)
    cons = math.fsum(float(s.consumption_day.sum()) for s in res_logs)
    return {
        "grid_day": grid_day,
        "harvest_day": harvest_day,
        "grid": _pct_reduction(g_no, g_res),
        "harvest": 100.0 * used / cons if cons > 0 else 0.0,
    }


def _mean_over(logs, attr, d=None):
    vals = [getattr(s, attr) if d is None else getattr(s, attr)[:, d] for s in logs]
    return float(np.mean([v.mean() for v in vals]))


def build_report(cfg, horizon, res_logs, no_res_logs):
    res_on = res_logs is not None
    primary = res_logs if res_on else no_res_logs
    day_anur, total_anur = compute_anur(primary)
    day_anur_no, total_anur_no = compute_anur(no_res_logs)
    arec = compute_arec(res_logs, no_res_logs) if res_on else None
    e_p = cfg.battery.E_primary
    seasons = {}
    for d, name in enumerate(horizon.names):
        seasons[name] = SeasonMetrics(
            pv_energy_total_per_uav=_mean_over(primary, "pv_energy_day", d),
            pv_energy_peak_per_uav=_mean_over(primary, "pv_peak_day", d),
            anur=day_anur[d],
            anur_no_res=day_anur_no[d],
            arec_grid=arec["grid_day"][d] if res_on else 0.0,
            arec_harvest=arec["harvest_day"][d] if res_on else 0.0,
            grid_energy=day_anur[d] * e_p,
            grid_energy_no_res=day_anur_no[d] * e_p,
            consumption_energy=_mean_over(primary, "consumption_day", d),
        )
    n_days = len(horizon.names)
    aggregate = SeasonMetrics(
        pv_energy_total_per_uav=float(np.mean([s.pv_energy_total_per_uav for s in seasons.values()])),
        pv_energy_peak_per_uav=float(np.mean([s.pv_energy_peak_per_uav for s in seasons.values()])),
        anur=total_anur,
        anur_no_res=total_anur_no,
        arec_grid=arec["grid"] if res_on else 0.0,
        arec_harvest=arec["harvest"] if res_on else 0.0,
        grid_energy=_mean_over(primary, "grid_energy"),
        grid_energy_no_res=_mean_over(no_res_logs, "grid_energy"),
        consumption_energy=float(np.mean([s.consumption_day.sum(axis=1).mean() for s in primary])),
    )
    meta = {
        "runs": cfg.simulation.runs,
        "seed": cfg.simulation.seed,
        "res_enabled": res_on,
        "step_s": horizon.step_s,
        "steps": horizon.n_steps,
        "days": n_days,
        "base_stations": len(cfg.scenario.base_stations),
        "users": cfg.scenario.n_users,
        "mean_served_users": float(np.mean([s.served_users for s in primary])),
        "mean_active_cells": float(np.mean([s.active_cells for s in primary])),
        "unserved_energy_wh": float(np.mean([s.unserved.mean() for s in primary])),
        "max_conservation_residual_wh": float(max(np.abs(s.residual).max() for s in primary)),
    }
    return MetricsReport(seasons, aggregate, meta)
