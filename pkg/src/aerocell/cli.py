"""Command-line front end.

Exit codes: 0 success, 1 validation violations, 2 configuration error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
from pathlib import Path

from . import kernel
from .config import config_diff, load_config
from .errors import ConfigError, WeatherError
from .output import OutputError, emit_results, metrics_schema
from .weather_io import load_weather_csv, synthetic_clear_sky, write_weather_csv

EXIT_OK, EXIT_VIOLATIONS, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3
MAX_SWEEP_POINTS = 1000


def _overrides(args):
    pairs = []
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise ConfigError(f"override '{item}' is not key=value")
        pairs.append(tuple(item.split("=", 1)))
    flag_map = (
        ("seed", "simulation.seed"),
        ("runs", "simulation.runs"),
        ("threads", "simulation.threads"),
        ("pshifter_units", "ris.P_PSH_units"),
    )
    for attr, key in flag_map:
        value = getattr(args, attr, None)
        if value is not None:
            pairs.append((key, json.dumps(value)))
    if getattr(args, "no_res", False):
        pairs.append(("simulation.res_enabled", "false"))
    if getattr(args, "include_lo", False):
        pairs.append(("mimo.include_lo", "true"))
    return pairs


def _config(args, extra=()):
    return load_config(args.config, overrides=[*_overrides(args), *extra])


def _common(p):
    p.add_argument("--config", type=Path, help="scenario JSON (default: bundled defaults)")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a dotted config key, e.g. pv.N_PV_p=10 (repeatable)")
    p.add_argument("--seed", type=int)
    p.add_argument("--runs", type=int)
    p.add_argument("--threads", type=int, help="worker threads for Monte Carlo runs")
    p.add_argument("--no-res", action="store_true", help="disable PV harvesting")
    p.add_argument("--include-lo", action="store_true", help="add local-oscillator power per transceiver")
    p.add_argument("--pshifter-units", choices=("w", "mw"), help="unit of ris.P_PSH")
    p.add_argument("--backend", choices=("python", "cython"), help="force a kernel backend")


def cmd_run(args):
    from .sim_engine import run_simulation

    cfg = _config(args)
    result = run_simulation(cfg, backend=args.backend)
    formats = ("json",) if args.no_csv else ("json", "csv")
    paths = emit_results(result.report, result.step_log, args.out, formats=formats, plot=args.plot)
    agg = result.report.aggregate
    print(f"ANUR {agg.anur:.3f} (no RES {agg.anur_no_res:.3f}), AREC {agg.arec_grid:.2f} %, "
          f"PV {agg.pv_energy_total_per_uav:.1f} Wh/day per UAV")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def cmd_validate(args):
    violations = []
    try:
        cfg = _config(args)
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return EXIT_VIOLATIONS
    for path in args.weather or []:
        try:
            load_weather_csv(path, max_gap_s=cfg.simulation.max_gap_s)
        except WeatherError as exc:
            violations.append(f"weather {path}: {exc}")
        except OSError as exc:
            violations.append(f"weather {path}: {exc.strerror}")
    for day in cfg.simulation.days:
        if day.weather_csv:
            try:
                load_weather_csv(day.weather_csv, max_gap_s=cfg.simulation.max_gap_s)
            except (WeatherError, OSError) as exc:
                violations.append(f"day {day.name}: {exc}")
    if not cfg.scenario.base_stations:
        violations.append("scenario.base_stations is empty")
    x0, y0, x1, y1 = cfg.scenario.bounds
    for i, p in enumerate(cfg.scenario.base_stations):
        if not (x0 <= p.x <= x1 and y0 <= p.y <= y1):
            violations.append(f"scenario.base_stations[{i}] outside bounds")
    diffs = config_diff(cfg)
    if diffs:
        print("differences from bundled defaults:")
        for key, ref, val in diffs:
            print(f"  {key}: {ref!r} -> {val!r}")
    else:
        print("configuration matches bundled defaults")
    if violations:
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        return EXIT_VIOLATIONS
    print("ok")
    return EXIT_OK


def parse_grid(items):
    grid = []
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"grid entry '{item}' is not key=v1,v2,...")
        key, values = item.split("=", 1)
        vals = [v for v in values.split(",") if v != ""]
        if not vals:
            raise ConfigError(f"grid entry '{key}' has no values")
        grid.append((key, vals))
    if not grid:
        raise ConfigError("empty sweep grid")
    return grid


def sweep_points(grid, cap=MAX_SWEEP_POINTS):
    n = 1
    for _, vals in grid:
        n *= len(vals)
    if n > cap:
        raise ConfigError(f"sweep grid has {n} points, cap is {cap}")
    keys = [k for k, _ in grid]
    return [list(zip(keys, combo)) for combo in itertools.product(*(v for _, v in grid))]


def cmd_sweep(args):
    from .sim_engine import run_simulation

    grid = parse_grid(args.grid)
    points = sweep_points(grid, args.max_points)
    rows = []
    for i, point in enumerate(points):
        cfg = _config(args, extra=point)
        agg = run_simulation(cfg, backend=args.backend, log_run=None).report.aggregate
        rows.append([i, *(v for _, v in point), agg.anur, agg.anur_no_res, agg.arec_grid,
                     agg.arec_harvest, agg.pv_energy_total_per_uav])
    out = Path(args.out) / "sweep.csv"
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["point", *(k for k, _ in grid), "anur", "anur_no_res", "arec_grid",
                        "arec_harvest", "pv_total"])
            w.writerows(rows)
    except OSError as exc:
        raise OutputError(f"{out}: {exc.strerror}") from exc
    print(f"wrote {out} ({len(rows)} points)")
    return EXIT_OK


def cmd_gen_weather(args):
    series = synthetic_clear_sky(args.day_of_year, args.latitude, args.peak, args.t_day,
                                 args.t_night, args.p0, args.step)
    if args.out is None:
        write_weather_csv(series, "/dev/stdout")
        return EXIT_OK
    path = Path(args.out) / f"weather_doy{args.day_of_year:03d}.csv"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        write_weather_csv(series, path)
    except OSError as exc:
        raise OutputError(f"{path}: {exc.strerror}") from exc
    print(f"wrote {path}")
    return EXIT_OK


def cmd_explain(args):
    if args.schema:
        print(json.dumps({"metrics": metrics_schema(),
                          "config": type(load_config()).model_json_schema()}, indent=2))
        return EXIT_OK
    from .atmosphere import atmosphere_state
    from .power_models import CellLoad, package_mass, total_consumption
    from .weather_io import WeatherSample

    cfg = _config(args)
    sc = cfg.scenario
    k = max(1, sc.n_users // max(1, len(sc.base_stations)))
    tr_dl = k * sc.demand_dl / 1000.0
    load = CellLoad(K_UE=k, M_BS=cfg.mimo.M_max, P_TX=10 ** (cfg.link_budget.P_TX_levels[0] / 10) / 1000,
                    TR_DL=tr_dl, TR_UL=tr_dl * cfg.mimo.D_UL / cfg.mimo.D_DL)
    atmo = atmosphere_state(WeatherSample(None, 15.0, 101325.0, 0.0), cfg.airframe.h_UAV,
                            cfg.site, cfg.atmosphere)
    m_pkg = package_mass(cfg.mimo, cfg.ris, cfg.pv, cfg.airframe)
    pb = total_consumption(cfg.airframe, cfg.mimo, cfg.ris, load, atmo, m_pkg)
    e_p = cfg.battery.E_primary
    print(f"kernel backend: {kernel.BACKEND}")
    print("step chain: weather -> atmosphere (T, p, rho, g) -> hover + MIMO + RIS power -> "
          "PV output -> energy balance -> battery -> swap on depletion")
    print(f"reference cell: K_UE={k}, M_BS={load.M_BS}, P_TX={load.P_TX:.3f} W, "
          f"15 degC / 101325 Pa, rho={atmo.rho:.4f} kg/m3")
    for name in ("p_hover", "p_mimo_cp", "p_mimo_pa", "p_ris", "p_aux", "p_total_dc"):
        print(f"  {name:11s} {getattr(pb, name):10.4f} W")
    print(f"usable energy per swap {e_p:.1f} Wh -> {e_p / pb.p_total_dc:.2f} h per UAV without PV")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="aerocell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate and write metrics/step log")
    _common(p)
    p.add_argument("--out", type=Path, default=Path("aerocell-out"), help="output directory")
    p.add_argument("--plot", action="store_true", help="also write SVG charts")
    p.add_argument("--no-csv", action="store_true", help="skip the per-step CSV")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate", help="check a config (and weather files) against invariants")
    _common(p)
    p.add_argument("--weather", action="append", type=Path, help="weather CSV to check (repeatable)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="Cartesian parameter sweep")
    _common(p)
    p.add_argument("--grid", action="append", metavar="KEY=V1,V2,...", help="swept key (repeatable)")
    p.add_argument("--out", type=Path, default=Path("aerocell-out"))
    p.add_argument("--max-points", type=int, default=MAX_SWEEP_POINTS)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen-weather", help="write a synthetic clear-sky day as CSV")
    p.add_argument("--day-of-year", type=int, required=True)
    p.add_argument("--latitude", type=float, default=52.4)
    p.add_argument("--peak", type=float, default=800.0, help="peak irradiance W/m2")
    p.add_argument("--t-day", type=float, default=20.0)
    p.add_argument("--t-night", type=float, default=10.0)
    p.add_argument("--p0", type=float, default=101325.0)
    p.add_argument("--step", type=float, default=60.0)
    p.add_argument("--out", type=Path, help="output directory (stdout when omitted)")
    p.set_defaults(func=cmd_gen_weather)

    p = sub.add_parser("explain", help="print the model chain and a reference power breakdown")
    _common(p)
    p.add_argument("--schema", action="store_true", help="print config and metrics JSON schemas")
    p.set_defaults(func=cmd_explain)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WeatherError as exc:
        print(f"weather error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OutputError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
